#pragma once

#include <string>

#include "decomp/config.hpp"

namespace decomp::cli {

// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDiagnostic = 1;   // lex/parse/semantic/inline error
inline constexpr int kExitNoGoals = 2;      // the program prints nothing
inline constexpr int kExitNonequivalent = 3;  // submission computes different outputs

// split <file>: write <stem>.plan.json, <stem>.split.src, <stem>.dot
// (+ <stem>.frames/NNN.dot with frames enabled).
int cmd_split(const std::string& input_path, const Config& config);

// score <student> <reference>: write <stem>.report.json and <stem>.feedback.md.
// The reference may be decomposed or undecomposed source; undecomposed
// references are decomposed by the split pipeline first.
int cmd_score(const std::string& student_path, const std::string& reference_path,
              const Config& config);

// batch <dir> <reference>: score every *.src file; write batch.json plus
// per-file reports. Individual failures become error rows; exit is 0 unless
// the reference itself fails.
int cmd_batch(const std::string& corpus_dir, const std::string& reference_path,
              const Config& config);

// dot <file>: write <stem>.dot (or frames).
int cmd_dot(const std::string& input_path, const Config& config);

// Atomic write: temp file in the target directory, then rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace decomp::cli
