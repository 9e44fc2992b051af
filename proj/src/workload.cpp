#include "metacache/workload.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "metacache/rng.hpp"

namespace metacache {

namespace {

using nlohmann::json;

constexpr uint64_t kMaxTreeDirs = 1000000;

std::string FileName(uint64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "f%07" PRIu64, index);
  return buf;
}

Result<OpKind> OpKindFromName(const std::string& name) {
  if (name == "MKDIR") return OpKind::kMkdir;
  if (name == "STAT") return OpKind::kStat;
  if (name == "OPEN_READ") return OpKind::kOpenRead;
  if (name == "CREATE") return OpKind::kCreate;
  if (name == "UNLINK") return OpKind::kUnlink;
  return Status::MalformedTrace("unknown op kind: " + name);
}

json SpecToJson(const WorkloadSpec& spec) {
  return json{
      {"num_files", spec.num_files},
      {"dir_fanout", spec.dir_fanout},
      {"tree_depth", spec.tree_depth},
      {"op_count", spec.op_count},
      {"op_mix",
       {{"stat", spec.op_mix.stat},
        {"open_read", spec.op_mix.open_read},
        {"create", spec.op_mix.create},
        {"unlink", spec.op_mix.unlink}}},
      {"file_size_min", spec.file_size_min},
      {"file_size_max", spec.file_size_max},
      {"seed", spec.seed},
  };
}

Result<WorkloadSpec> SpecFromJson(const json& j) {
  WorkloadSpec spec;
  try {
    spec.num_files = j.at("num_files").get<uint64_t>();
    spec.dir_fanout = j.at("dir_fanout").get<uint32_t>();
    spec.tree_depth = j.at("tree_depth").get<uint32_t>();
    spec.op_count = j.at("op_count").get<uint64_t>();
    const json& mix = j.at("op_mix");
    spec.op_mix.stat = mix.at("stat").get<double>();
    spec.op_mix.open_read = mix.at("open_read").get<double>();
    spec.op_mix.create = mix.at("create").get<double>();
    spec.op_mix.unlink = mix.at("unlink").get<double>();
    spec.file_size_min = j.at("file_size_min").get<uint64_t>();
    spec.file_size_max = j.at("file_size_max").get<uint64_t>();
    spec.seed = j.at("seed").get<uint64_t>();
  } catch (const json::exception& e) {
    return Status::MalformedTrace(std::string("bad spec in trace header: ") + e.what());
  }
  return spec;
}

}  // namespace

const char* OpKindName(OpKind kind) {
  switch (kind) {
    case OpKind::kMkdir: return "MKDIR";
    case OpKind::kStat: return "STAT";
    case OpKind::kOpenRead: return "OPEN_READ";
    case OpKind::kCreate: return "CREATE";
    case OpKind::kUnlink: return "UNLINK";
  }
  return "?";
}

Status WorkloadSpec::Validate() const {
  if (num_files == 0 || dir_fanout == 0 || tree_depth == 0 || op_count == 0) {
    return Status::InvalidSpec("all counts must be > 0");
  }
  if (std::abs(op_mix.Sum() - 1.0) > 1e-9) {
    return Status::InvalidSpec("op mix fractions must sum to 1");
  }
  if (op_mix.stat < 0 || op_mix.open_read < 0 || op_mix.create < 0 || op_mix.unlink < 0) {
    return Status::InvalidSpec("op mix fractions must be non-negative");
  }
  if (file_size_min > file_size_max) {
    return Status::InvalidSpec("file_size_min must be <= file_size_max");
  }
  double dirs = 0;
  double level = 1;
  for (uint32_t d = 0; d < tree_depth; d++) {
    level *= dir_fanout;
    dirs += level;
  }
  if (dirs > static_cast<double>(kMaxTreeDirs)) {
    return Status::InvalidSpec("directory tree too large (fanout^depth)");
  }
  return Status::Ok();
}

uint64_t Trace::SetupOpCount() const {
  uint64_t n = 0;
  for (const auto& op : ops) n += op.setup ? 1 : 0;
  return n;
}

uint64_t Trace::BenchOpCount() const { return ops.size() - SetupOpCount(); }

Result<Trace> GenerateTrace(const WorkloadSpec& spec) {
  if (Status st = spec.Validate(); !st.ok()) return st;

  Rng rng(spec.seed);
  Trace trace;
  trace.spec = spec;

  // Directory tree, breadth-first: level k holds fanout^k directories.
  std::vector<std::string> level_dirs = {"/"};
  std::vector<std::string> leaf_dirs;
  std::vector<std::string> all_paths;
  for (uint32_t depth = 1; depth <= spec.tree_depth; depth++) {
    std::vector<std::string> next;
    next.reserve(level_dirs.size() * spec.dir_fanout);
    for (const std::string& parent : level_dirs) {
      for (uint32_t i = 0; i < spec.dir_fanout; i++) {
        std::string path = parent == "/" ? "/d" + std::to_string(i)
                                         : parent + "/d" + std::to_string(i);
        trace.ops.push_back(TraceOp{OpKind::kMkdir, true, path, 0});
        all_paths.push_back(path);
        next.push_back(std::move(path));
      }
    }
    level_dirs = std::move(next);
  }
  leaf_dirs = level_dirs;

  // Initial population: small files spread over the leaf directories.
  std::vector<std::string> live_files;
  uint64_t next_file = 0;
  auto new_file_path = [&] {
    const std::string& dir = leaf_dirs[rng.Uniform(leaf_dirs.size())];
    return dir + "/" + FileName(next_file++);
  };
  for (uint64_t i = 0; i < spec.num_files; i++) {
    std::string path = new_file_path();
    uint64_t size = rng.UniformRange(spec.file_size_min, spec.file_size_max);
    trace.ops.push_back(TraceOp{OpKind::kCreate, true, path, size});
    all_paths.push_back(path);
    live_files.push_back(std::move(path));
  }

  // Benchmark phase.
  const double c_stat = spec.op_mix.stat;
  const double c_open = c_stat + spec.op_mix.open_read;
  const double c_create = c_open + spec.op_mix.create;
  for (uint64_t i = 0; i < spec.op_count; i++) {
    double r = rng.NextDouble();
    OpKind kind = r < c_stat      ? OpKind::kStat
                  : r < c_open    ? OpKind::kOpenRead
                  : r < c_create  ? OpKind::kCreate
                                  : OpKind::kUnlink;
    if ((kind == OpKind::kOpenRead || kind == OpKind::kUnlink) && live_files.empty()) {
      kind = OpKind::kCreate;  // nothing left to read or remove
    }
    switch (kind) {
      case OpKind::kStat:
        trace.ops.push_back(
            TraceOp{OpKind::kStat, false, all_paths[rng.Uniform(all_paths.size())], 0});
        break;
      case OpKind::kOpenRead:
        trace.ops.push_back(
            TraceOp{OpKind::kOpenRead, false, live_files[rng.Uniform(live_files.size())], 0});
        break;
      case OpKind::kCreate: {
        std::string path = new_file_path();
        uint64_t size = rng.UniformRange(spec.file_size_min, spec.file_size_max);
        trace.ops.push_back(TraceOp{OpKind::kCreate, false, path, size});
        all_paths.push_back(path);
        live_files.push_back(std::move(path));
        break;
      }
      case OpKind::kUnlink: {
        size_t pick = rng.Uniform(live_files.size());
        trace.ops.push_back(TraceOp{OpKind::kUnlink, false, live_files[pick], 0});
        live_files[pick] = std::move(live_files.back());
        live_files.pop_back();
        break;
      }
      case OpKind::kMkdir:
        break;  // unreachable
    }
  }
  return trace;
}

std::string TraceHeaderJson(const WorkloadSpec& spec) {
  json header{{"kind", "header"}, {"version", 1}, {"spec", SpecToJson(spec)}};
  return header.dump();
}

std::string SerializeTrace(const Trace& trace) {
  std::string out = TraceHeaderJson(trace.spec);
  out.push_back('\n');
  for (const auto& op : trace.ops) {
    json j{{"kind", "op"},
           {"op", OpKindName(op.kind)},
           {"phase", op.setup ? "setup" : "bench"},
           {"path", op.path}};
    if (op.kind == OpKind::kCreate) j["size"] = op.size;
    out += j.dump();
    out.push_back('\n');
  }
  return out;
}

Status SaveTrace(const Trace& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return Status::IoError("cannot create " + path.string());
  std::string text = SerializeTrace(trace);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) return Status::IoError("write failed on " + path.string());
  return Status::Ok();
}

Result<Trace> ParseTrace(const std::string& text) {
  Trace trace;
  size_t pos = 0;
  bool saw_header = false;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.empty()) continue;

    json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) return Status::MalformedTrace("invalid JSON line");
    std::string kind = j.value("kind", "");
    if (!saw_header) {
      if (kind != "header") return Status::MalformedTrace("first line must be the header");
      if (!j.contains("spec")) return Status::MalformedTrace("header missing spec");
      auto spec = SpecFromJson(j["spec"]);
      if (!spec.ok()) return spec.status();
      trace.spec = *spec;
      saw_header = true;
      continue;
    }
    if (kind != "op") return Status::MalformedTrace("expected an op line");
    TraceOp op;
    auto op_kind = OpKindFromName(j.value("op", ""));
    if (!op_kind.ok()) return op_kind.status();
    op.kind = *op_kind;
    std::string phase = j.value("phase", "");
    if (phase != "setup" && phase != "bench") {
      return Status::MalformedTrace("op phase must be setup or bench");
    }
    op.setup = phase == "setup";
    if (!j.contains("path") || !j["path"].is_string()) {
      return Status::MalformedTrace("op missing path");
    }
    op.path = j["path"].get<std::string>();
    op.size = j.value("size", uint64_t{0});
    trace.ops.push_back(std::move(op));
  }
  if (!saw_header) return Status::MalformedTrace("empty trace file");
  return trace;
}

Result<Trace> LoadTrace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return Status::IoError("cannot read " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) return Status::IoError("read failed on " + path.string());
  return ParseTrace(text);
}

}  // namespace metacache
