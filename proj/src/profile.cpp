#include "rdfront/profile.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>

namespace rdfront {

Profile::Profile(double t0, double dt, int m, std::vector<double> values,
                 DecayMeta decay)
    : t0_(t0), dt_(dt), m_(m), values_(std::move(values)), decay_(std::move(decay)) {
  if (m_ <= 0 || dt_ <= 0.0 || values_.size() % m_ != 0)
    throw numeric_error("profile: inconsistent dimensions");
  n_ = static_cast<int>(values_.size()) / m_;
  if (n_ < 2) throw numeric_error("profile: need at least two nodes");
}

void Profile::eval(double t, std::span<double> out) const {
  const double idx = (t - t0_) / dt_;
  if (idx <= 0.0) {
    const double e = std::exp(decay_.rate * t);
    for (int j = 0; j < m_; ++j) out[j] = decay_.amplitude[j] * e;
    return;
  }
  if (idx >= n_ - 1) {
    auto last = node(n_ - 1);
    for (int j = 0; j < m_; ++j) out[j] = last[j];
    return;
  }
  const int i0 = static_cast<int>(idx);
  const double fr = idx - i0;
  const double* a = values_.data() + static_cast<std::size_t>(i0) * m_;
  for (int j = 0; j < m_; ++j) out[j] = (1.0 - fr) * a[j] + fr * a[j + m_];
}

Vec Profile::eval(double t) const {
  Vec out(m_);
  eval(t, out);
  return out;
}

bool Profile::is_nondecreasing(double slack) const {
  for (int i = 1; i < n_; ++i)
    for (int j = 0; j < m_; ++j)
      if (value(i, j) < value(i - 1, j) - slack) return false;
  return true;
}

double Profile::min_value() const {
  double r = values_.empty() ? 0.0 : values_[0];
  for (double v : values_) r = std::min(r, v);
  return r;
}

double Profile::max_box_excess(std::span<const double> box_upper) const {
  double r = -1e300;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < m_; ++j) r = std::max(r, value(i, j) - box_upper[j]);
  return r;
}

namespace {
constexpr std::uint64_t kMagic = 0x7264662d70726f66ull;  // "rdf-prof"
}

void Profile::save_binary(const std::string& path) const {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw config_error("cannot open for writing: " + path);
  auto put = [&](const void* p, std::size_t sz) {
    os.write(static_cast<const char*>(p), static_cast<std::streamsize>(sz));
  };
  std::uint64_t magic = kMagic;
  std::int64_t m = m_, n = n_;
  put(&magic, 8);
  put(&t0_, 8);
  put(&dt_, 8);
  put(&m, 8);
  put(&n, 8);
  put(&decay_.rate, 8);
  put(decay_.amplitude.data(), 8 * decay_.amplitude.size());
  put(values_.data(), 8 * values_.size());
  if (!os) throw config_error("short write: " + path);
}

Profile Profile::load_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw config_error("cannot open: " + path);
  auto get = [&](void* p, std::size_t sz) {
    is.read(static_cast<char*>(p), static_cast<std::streamsize>(sz));
  };
  std::uint64_t magic = 0;
  double t0 = 0, dt = 0, rate = 0;
  std::int64_t m = 0, n = 0;
  get(&magic, 8);
  if (magic != kMagic) throw config_error("bad profile cache file: " + path);
  get(&t0, 8);
  get(&dt, 8);
  get(&m, 8);
  get(&n, 8);
  get(&rate, 8);
  DecayMeta meta;
  meta.rate = rate;
  meta.amplitude.resize(m);
  get(meta.amplitude.data(), 8 * m);
  std::vector<double> vals(static_cast<std::size_t>(m) * n);
  get(vals.data(), 8 * vals.size());
  if (!is) throw config_error("short read: " + path);
  return Profile(t0, dt, static_cast<int>(m), std::move(vals), std::move(meta));
}

}  // namespace rdfront
