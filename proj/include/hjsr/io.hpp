#pragma once

#include "hjsr/kerngen.hpp"
#include "hjsr/verify.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace hjsr {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Strict reader: unknown fields, wrong types and inconsistent shapes throw
/// InvalidArgument naming the offending field (e.g. "sets[1].matrices[0].rows").
InstanceSpec instance_from_json(const Json& j);
/// Also reports unreadable files and JSON syntax errors as InvalidArgument.
InstanceSpec load_instance(const std::filesystem::path& path);

Json instance_to_json(const InstanceSpec& inst);
Json params_to_json(const ChainParams& p);
Json bracket_to_json(const Bracket& b);
Json options_to_json(const CheckOptions& opts);
Json gen_to_json(const GenParams& gen);

/// A ViolationCertified verdict also gets a "witness" with the digest and `params`.
Json verdict_to_json(const Verdict& v, const CheckOptions& opts, const ChainParams& params);
/// runtime_ms fields are written only when `timing` is set, so that reports
/// of identical runs are byte-identical.
Json fuzz_report_to_json(const FuzzReport& r, bool timing);
Json example_to_json(const PaperExample& ex, const ExampleOutcome& out);

/// Pretty-printed with a trailing newline; throws InvalidArgument when the file
/// cannot be written.
void write_json(const std::filesystem::path& path, const Json& j);

}  // namespace hjsr
