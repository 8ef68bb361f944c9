//
// Project isqsim - Copyright 2026 the isqsim authors.
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <string>

#include "isq/sim.hpp"

namespace isq {

inline constexpr const char* kVersion = "isqsim 0.1.0";

// Locale-independent formatting with 9 significant digits.
std::string format_g9(double value);

// Fixed column order; part of the public output contract.
std::string csv_header();
std::string csv_row(const SerStats& s, const ExperimentConfig& config);

// Full CSV document: header, one row per stats entry, and a final summary
// line with the row count. Identical configs render identical bytes.
std::string render_csv(const ExperimentResult& result, const ExperimentConfig& config);

std::string jsonl_row(const SerStats& s, const ExperimentConfig& config);
std::string render_jsonl(const ExperimentResult& result, const ExperimentConfig& config);

// Companion gnuplot script plotting SER vs n per decoder from the CSV.
std::string gnuplot_script(const std::string& csv_path, const ExperimentConfig& config);

}  // namespace isq
