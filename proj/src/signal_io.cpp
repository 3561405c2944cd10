#include "bdqmap/signal_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <string>

#include "bdqmap/errors.hpp"

namespace bdqmap {

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

double parse_double(const std::string& tok, const std::filesystem::path& path,
                    std::size_t line) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw IoError(path.string() + ":" + std::to_string(line) +
                  ": bad numeric field '" + tok + "'");
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

std::string read_line_stripped(std::ifstream& in) {
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

void write_signal_csv(const std::filesystem::path& path,
                      std::span<const double> x, std::span<const double> y) {
  if (x.empty() && y.empty())
    throw ConfigError("write_signal_csv: both columns empty");
  if (!x.empty() && !y.empty() && x.size() != y.size())
    throw ConfigError("write_signal_csv: column length mismatch");
  const std::size_t n = x.empty() ? y.size() : x.size();
  std::ofstream out = open_out(path);
  out << "index,x,y\n";
  for (std::size_t i = 0; i < n; ++i) {
    out << i << ',';
    if (!x.empty()) out << fmt_g17(x[i]);
    out << ',';
    if (!y.empty()) out << fmt_g17(y[i]);
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

SignalColumns read_signal_csv(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::string header = read_line_stripped(in);
  if (header != "index,x,y")
    throw IoError(path.string() + ": expected header 'index,x,y'");
  SignalColumns cols;
  std::size_t line_no = 1;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 3)
      throw IoError(path.string() + ":" + std::to_string(line_no) +
                    ": expected 3 fields");
    const std::size_t row = cols.x.size() > cols.y.size() ? cols.x.size()
                                                          : cols.y.size();
    if (parse_double(fields[0], path, line_no) != (double)row)
      throw IoError(path.string() + ":" + std::to_string(line_no) +
                    ": index column out of order");
    const bool has_x = !fields[1].empty();
    const bool has_y = !fields[2].empty();
    if (row > 0 && (has_x != !cols.x.empty() || has_y != !cols.y.empty()))
      throw IoError(path.string() + ": ragged columns");
    if (!has_x && !has_y)
      throw IoError(path.string() + ":" + std::to_string(line_no) +
                    ": row with no values");
    if (has_x) cols.x.push_back(parse_double(fields[1], path, line_no));
    if (has_y) cols.y.push_back(parse_double(fields[2], path, line_no));
  }
  if (cols.x.empty() && cols.y.empty())
    throw IoError(path.string() + ": no data rows");
  return cols;
}

void write_segments_csv(const std::filesystem::path& path,
                        const PiecewiseSignal& signal) {
  if (signal.values.empty())
    throw ConfigError("write_segments_csv: empty signal");
  std::ofstream out = open_out(path);
  out << "segment,start,length,amplitude\n";
  std::size_t start = 0;
  for (std::size_t j = 0; j < signal.segment_lengths.size(); ++j) {
    out << j << ',' << start << ',' << signal.segment_lengths[j] << ','
        << fmt_g17(signal.values[start]) << '\n';
    start += signal.segment_lengths[j];
  }
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<std::size_t> read_segments_csv(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::string header = read_line_stripped(in);
  if (header != "segment,start,length,amplitude")
    throw IoError(path.string() +
                  ": expected header 'segment,start,length,amplitude'");
  std::vector<std::size_t> boundaries;
  std::size_t expected_start = 0;
  std::size_t seg = 0;
  std::size_t line_no = 1;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 4)
      throw IoError(path.string() + ":" + std::to_string(line_no) +
                    ": expected 4 fields");
    const auto start = (std::size_t)parse_double(fields[1], path, line_no);
    const auto length = (std::size_t)parse_double(fields[2], path, line_no);
    if ((std::size_t)parse_double(fields[0], path, line_no) != seg ||
        start != expected_start || length == 0)
      throw IoError(path.string() + ":" + std::to_string(line_no) +
                    ": inconsistent segment row");
    if (seg > 0) boundaries.push_back(start);
    expected_start = start + length;
    ++seg;
  }
  if (seg == 0) throw IoError(path.string() + ": no segments");
  return boundaries;
}

}  // namespace bdqmap
