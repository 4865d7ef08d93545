#include "nn/mlp.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "common/binio.hpp"

namespace agac::nn {

int MlpSpec::max_width() const {
  return *std::max_element(dims.begin(), dims.end());
}

std::size_t MlpSpec::param_count() const {
  std::size_t n = 0;
  for (int l = 0; l + 1 < static_cast<int>(dims.size()); ++l)
    n += static_cast<std::size_t>(dims[l]) * dims[l + 1] + dims[l + 1];
  return n;
}

ParamSet::ParamSet(MlpSpec s) : spec(std::move(s)) {
  if (spec.dims.size() < 2) throw std::invalid_argument("MlpSpec needs at least two dims");
  for (int d : spec.dims)
    if (d <= 0) throw std::invalid_argument("MlpSpec dims must be positive");
  std::size_t off = 0;
  for (int l = 0; l < spec.layer_count(); ++l) {
    w_off.push_back(off);
    off += static_cast<std::size_t>(spec.dims[l]) * spec.dims[l + 1];
    b_off.push_back(off);
    off += spec.dims[l + 1];
  }
  data.assign(off, 0.0);
}

void ParamSet::init_glorot(Rng& rng) {
  for (int l = 0; l < spec.layer_count(); ++l) {
    const int in = spec.dims[l], out = spec.dims[l + 1];
    const double limit = std::sqrt(6.0 / (in + out));
    double* W = w(l);
    for (std::size_t k = 0; k < static_cast<std::size_t>(in) * out; ++k)
      W[k] = rng.uniform(-limit, limit);
    double* B = b(l);
    for (int i = 0; i < out; ++i) B[i] = 0.0;
  }
}

void ParamSet::save(std::ostream& os) const {
  binio::write_magic(os, "AGPS");
  binio::write_le<std::uint32_t>(os, 1);  // version
  binio::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(spec.dims.size()));
  for (int d : spec.dims) binio::write_le<std::int32_t>(os, d);
  binio::write_le<std::uint64_t>(os, data.size());
  for (double v : data) binio::write_le<double>(os, v);
}

ParamSet ParamSet::load(std::istream& is) {
  binio::expect_magic(is, "AGPS");
  const auto version = binio::read_le<std::uint32_t>(is);
  if (version != 1) throw std::runtime_error("unsupported ParamSet version");
  const auto ndims = binio::read_le<std::uint32_t>(is);
  if (ndims < 2 || ndims > 64) throw std::runtime_error("bad ParamSet dim count");
  MlpSpec s;
  for (std::uint32_t i = 0; i < ndims; ++i) s.dims.push_back(binio::read_le<std::int32_t>(is));
  ParamSet p(s);
  const auto n = binio::read_le<std::uint64_t>(is);
  if (n != p.data.size()) throw std::runtime_error("ParamSet size mismatch");
  for (auto& v : p.data) v = binio::read_le<double>(is);
  return p;
}

void ParamSet::save_text(std::ostream& os) const {
  os << "AGPS-text 1\n";
  os << "dims";
  for (int d : spec.dims) os << ' ' << d;
  os << '\n' << data.size() << '\n';
  char buf[64];
  for (double v : data) {
    std::snprintf(buf, sizeof(buf), "%.17g\n", v);
    os << buf;
  }
}

ParamSet ParamSet::load_text(std::istream& is) {
  std::string header, tag;
  int version = 0;
  is >> header >> version;
  if (header != "AGPS-text" || version != 1) throw std::runtime_error("bad text ParamSet header");
  is >> tag;
  if (tag != "dims") throw std::runtime_error("bad text ParamSet dims line");
  std::string rest;
  std::getline(is, rest);
  std::istringstream ds(rest);
  MlpSpec s;
  int d;
  while (ds >> d) s.dims.push_back(d);
  ParamSet p(s);
  std::size_t n = 0;
  is >> n;
  if (n != p.data.size()) throw std::runtime_error("text ParamSet size mismatch");
  for (auto& v : p.data)
    if (!(is >> v)) throw std::runtime_error("truncated text ParamSet");
  return p;
}

}  // namespace agac::nn
