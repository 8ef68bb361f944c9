//
// Project isqsim - Copyright 2026 the isqsim authors.
// SPDX-License-Identifier: Apache-2.0
//
#include "isq/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace isq {

std::string format_g9(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 9);
  if (res.ec != std::errc()) throw std::runtime_error("format_g9: conversion failed");
  return std::string(buf, res.ptr);
}

std::string csv_header() {
  return "decoder,n,m,alpha,sigma,fading,constellation,trials,symbol_errors,symbols_total,"
         "ser_point,ser_ci_low,ser_ci_high,block_ge_k_count,p_e_k_point,k_fraction,"
         "epsilon,delta,master_seed,version";
}

std::string csv_row(const SerStats& s, const ExperimentConfig& config) {
  std::ostringstream out;
  out << to_string(s.decoder) << ',' << s.n << ',' << s.m << ',' << format_g9(s.alpha) << ','
      << format_g9(s.sigma) << ',' << to_string(config.fading) << ',' << config.constellation
      << ',' << s.trials << ',' << s.symbol_errors << ',' << s.symbols_total << ','
      << format_g9(s.ser_point) << ',' << format_g9(s.ser_ci_low) << ','
      << format_g9(s.ser_ci_high) << ',' << s.block_ge_k_count << ','
      << format_g9(s.p_e_k_point) << ',' << format_g9(s.k_fraction) << ','
      << format_g9(config.epsilon) << ',' << format_g9(config.delta) << ','
      << config.master_seed << ',' << kVersion;
  return out.str();
}

std::string render_csv(const ExperimentResult& result, const ExperimentConfig& config) {
  std::string doc = csv_header();
  doc += '\n';
  for (const SerStats& s : result.stats) {
    doc += csv_row(s, config);
    doc += '\n';
  }
  doc += "# rows=" + std::to_string(result.stats.size()) +
         " skips=" + std::to_string(result.skips.size()) + "\n";
  return doc;
}

std::string jsonl_row(const SerStats& s, const ExperimentConfig& config) {
  std::ostringstream out;
  out << "{\"decoder\":\"" << to_string(s.decoder) << "\",\"n\":" << s.n << ",\"m\":" << s.m
      << ",\"alpha\":" << format_g9(s.alpha) << ",\"sigma\":" << format_g9(s.sigma)
      << ",\"fading\":\"" << to_string(config.fading) << "\",\"constellation\":\""
      << config.constellation << "\",\"trials\":" << s.trials
      << ",\"symbol_errors\":" << s.symbol_errors << ",\"symbols_total\":" << s.symbols_total
      << ",\"ser_point\":" << format_g9(s.ser_point)
      << ",\"ser_ci_low\":" << format_g9(s.ser_ci_low)
      << ",\"ser_ci_high\":" << format_g9(s.ser_ci_high)
      << ",\"block_ge_k_count\":" << s.block_ge_k_count
      << ",\"p_e_k_point\":" << format_g9(s.p_e_k_point)
      << ",\"k_fraction\":" << format_g9(s.k_fraction)
      << ",\"epsilon\":" << format_g9(config.epsilon) << ",\"delta\":" << format_g9(config.delta)
      << ",\"master_seed\":" << config.master_seed << ",\"version\":\"" << kVersion << "\"}";
  return out.str();
}

std::string render_jsonl(const ExperimentResult& result, const ExperimentConfig& config) {
  std::string doc;
  for (const SerStats& s : result.stats) {
    doc += jsonl_row(s, config);
    doc += '\n';
  }
  return doc;
}

std::string gnuplot_script(const std::string& csv_path, const ExperimentConfig& config) {
  std::ostringstream out;
  out << "set datafile separator ','\n"
      << "set logscale y\n"
      << "set xlabel 'n (transmitters)'\n"
      << "set ylabel 'symbol error rate'\n"
      << "set key top right\n"
      << "plot ";
  bool first = true;
  for (DecoderId id : config.decoders) {
    if (!first) out << ", \\\n     ";
    first = false;
    out << "'" << csv_path << "' using 2:(strcol(1) eq '" << to_string(id)
        << "' ? column(11) : 1/0) with linespoints title '" << to_string(id) << "'";
  }
  out << "\n";
  return out.str();
}

}  // namespace isq
