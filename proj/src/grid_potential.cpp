#include "gibbslab/grid_potential.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

namespace gibbslab {
namespace {

constexpr char kMagic[8] = {'G', 'L', 'G', 'R', 'I', 'D', '1', '\0'};

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  return out;
}

double parse_number(const std::string& s) {
  if (s == "inf" || s == "+inf" || s == "Infinity") return kInf;
  std::size_t used = 0;
  double v;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("tabulated grid: bad number '" + s + "'");
  }
  if (used != s.size()) throw InvalidArgument("tabulated grid: bad number '" + s + "'");
  if (std::isnan(v) || v == -kInf) throw InvalidArgument("tabulated grid: values must not be NaN or -inf");
  return v;
}

template <class T>
T read_pod(std::istream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw InvalidArgument("tabulated grid: truncated binary file");
  return v;
}

template <class T>
void write_pod(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

}  // namespace

TabulatedGrid::TabulatedGrid(Point lo, Point hi, double step, std::vector<double> values)
    : lo_(std::move(lo)), hi_(std::move(hi)), step_(step), values_(std::move(values)) {
  if (lo_.empty() || lo_.size() != hi_.size()) throw InvalidArgument("tabulated grid: bad bounds");
  if (!(step_ > 0.0) || !std::isfinite(step_)) throw InvalidArgument("tabulated grid: step must be positive");
  std::size_t total = 1;
  for (std::size_t k = 0; k < lo_.size(); ++k) {
    if (!(hi_[k] > lo_[k])) throw InvalidArgument("tabulated grid: hi must exceed lo on every axis");
    const double cells = (hi_[k] - lo_[k]) / step_;
    const double rounded = std::round(cells);
    if (std::abs(cells - rounded) > 1e-6 * std::max(1.0, cells)) {
      throw InvalidArgument("tabulated grid: (hi - lo) / step must be an integer on every axis");
    }
    shape_.push_back(static_cast<std::size_t>(rounded) + 1);
    total *= shape_.back();
  }
  if (values_.size() != total) {
    throw InvalidArgument("tabulated grid: expected " + std::to_string(total) + " values, got " +
                          std::to_string(values_.size()));
  }
  for (double v : values_) {
    if (std::isnan(v) || v == -kInf) throw InvalidArgument("tabulated grid: values must not be NaN or -inf");
  }
}

TabulatedGrid TabulatedGrid::read_csv(std::istream& is) {
  std::string line;
  std::size_t d = 0;
  Point lo, hi;
  double step = 0.0;
  std::vector<double> values;
  bool in_values = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split_csv(line);
    if (cells.empty() || (cells.size() == 1 && cells[0].empty())) continue;
    if (in_values) {
      for (const auto& c : cells) {
        if (!c.empty()) values.push_back(parse_number(c));
      }
      continue;
    }
    const std::string& key = cells[0];
    if (key == "d") {
      if (cells.size() != 2) throw InvalidArgument("tabulated grid: 'd' takes one value");
      d = static_cast<std::size_t>(parse_number(cells[1]));
    } else if (key == "lo" || key == "hi") {
      Point p;
      for (std::size_t k = 1; k < cells.size(); ++k) p.push_back(parse_number(cells[k]));
      (key == "lo" ? lo : hi) = std::move(p);
    } else if (key == "step") {
      if (cells.size() != 2) throw InvalidArgument("tabulated grid: 'step' takes one value");
      step = parse_number(cells[1]);
    } else if (key == "values") {
      in_values = true;
    } else {
      throw InvalidArgument("tabulated grid: unknown header key '" + key + "'");
    }
  }
  if (d == 0 || lo.size() != d || hi.size() != d) {
    throw InvalidArgument("tabulated grid: header must give d and d-dimensional lo/hi");
  }
  return TabulatedGrid(std::move(lo), std::move(hi), step, std::move(values));
}

TabulatedGrid TabulatedGrid::read_binary(std::istream& is) {
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kMagic, 8) != 0) throw InvalidArgument("tabulated grid: bad binary magic");
  const auto d = read_pod<std::uint64_t>(is);
  if (d == 0 || d > 16) throw InvalidArgument("tabulated grid: unsupported dimension");
  Point lo(d), hi(d);
  for (auto& v : lo) v = read_pod<double>(is);
  for (auto& v : hi) v = read_pod<double>(is);
  const double step = read_pod<double>(is);
  std::size_t total = 1;
  for (std::size_t k = 0; k < d; ++k) {
    total *= static_cast<std::size_t>(std::llround((hi[k] - lo[k]) / step)) + 1;
  }
  std::vector<double> values(total);
  for (auto& v : values) v = read_pod<double>(is);
  return TabulatedGrid(std::move(lo), std::move(hi), step, std::move(values));
}

TabulatedGrid TabulatedGrid::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("tabulated grid: cannot open '" + path + "'");
  char magic[8] = {};
  in.read(magic, 8);
  const bool binary = in.gcount() == 8 && std::memcmp(magic, kMagic, 8) == 0;
  in.clear();
  in.seekg(0);
  return binary ? read_binary(in) : read_csv(in);
}

void TabulatedGrid::write_csv(std::ostream& os) const {
  const auto old = os.precision(17);
  os << "d," << dim() << "\nlo";
  for (double v : lo_) os << ',' << v;
  os << "\nhi";
  for (double v : hi_) os << ',' << v;
  os << "\nstep," << step_ << "\nvalues\n";
  const std::size_t row = shape_.back();
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (std::isinf(values_[i])) {
      os << "inf";
    } else {
      os << values_[i];
    }
    os << ((i + 1) % row == 0 ? '\n' : ',');
  }
  os.precision(old);
}

void TabulatedGrid::write_binary(std::ostream& os) const {
  os.write(kMagic, 8);
  write_pod<std::uint64_t>(os, dim());
  for (double v : lo_) write_pod(os, v);
  for (double v : hi_) write_pod(os, v);
  write_pod(os, step_);
  for (double v : values_) write_pod(os, v);
}

double TabulatedGrid::operator()(std::span<const double> x) const {
  const std::size_t d = dim();
  if (x.size() != d) throw InvalidArgument("tabulated grid: point of wrong dimension");
  std::vector<std::size_t> base(d);
  std::vector<double> frac(d);
  for (std::size_t k = 0; k < d; ++k) {
    if (!(x[k] >= lo_[k] && x[k] <= hi_[k])) return kInf;
    const double t = (x[k] - lo_[k]) / step_;
    std::size_t i = static_cast<std::size_t>(std::floor(t));
    if (i + 1 >= shape_[k]) i = shape_[k] - 2;
    base[k] = i;
    frac[k] = std::clamp(t - static_cast<double>(i), 0.0, 1.0);
  }
  double acc = 0.0;
  for (std::size_t corner = 0; corner < (std::size_t{1} << d); ++corner) {
    double weight = 1.0;
    std::size_t flat = 0;
    for (std::size_t k = 0; k < d; ++k) {
      const bool up = (corner >> k) & 1u;
      weight *= up ? frac[k] : 1.0 - frac[k];
      flat = flat * shape_[k] + base[k] + (up ? 1 : 0);
    }
    if (weight == 0.0) continue;
    const double v = values_[flat];
    if (v == kInf) return kInf;
    acc += weight * v;
  }
  return acc;
}

namespace potentials {

ConfinementFn tabulated_confinement(TabulatedGrid table) {
  auto t = std::make_shared<const TabulatedGrid>(std::move(table));
  return [t](std::span<const double> x) { return (*t)(x); };
}

InteractionFn tabulated_kernel(TabulatedGrid table) {
  auto t = std::make_shared<const TabulatedGrid>(std::move(table));
  return [t](std::span<const double> x, std::span<const double> y) {
    Point z(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) z[k] = x[k] - y[k];
    return (*t)(z);
  };
}

InteractionFn tabulated_pair(TabulatedGrid table) {
  auto t = std::make_shared<const TabulatedGrid>(std::move(table));
  return [t](std::span<const double> x, std::span<const double> y) {
    Point z(x.begin(), x.end());
    z.insert(z.end(), y.begin(), y.end());
    return (*t)(z);
  };
}

}  // namespace potentials
}  // namespace gibbslab
