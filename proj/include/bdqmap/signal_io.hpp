#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "bdqmap/sources.hpp"

namespace bdqmap {

// Signal CSV: header "index,x,y", one row per sample, floats written with 17
// significant digits so a reload reproduces the doubles exactly. Either
// column may be all-empty when unknown (e.g. a despeckled output has no y).
struct SignalColumns {
  std::vector<double> x;
  std::vector<double> y;
};

void write_signal_csv(const std::filesystem::path& path,
                      std::span<const double> x, std::span<const double> y);

SignalColumns read_signal_csv(const std::filesystem::path& path);

// Segment sidecar CSV: header "segment,start,length,amplitude".
void write_segments_csv(const std::filesystem::path& path,
                        const PiecewiseSignal& signal);

// Jump boundaries recovered from a sidecar (the starts of segments 1..).
std::vector<std::size_t> read_segments_csv(const std::filesystem::path& path);

// printf "%.17g": shortest text that reloads bit-for-bit, deterministic.
std::string fmt_g17(double v);

}  // namespace bdqmap
