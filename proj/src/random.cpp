#include "fdstat/random.hpp"

#include <cmath>

namespace fdstat {

namespace {
std::uint32_t lo32(std::uint64_t x) { return static_cast<std::uint32_t>(x & 0xffffffffu); }
std::uint32_t hi32(std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); }
}  // namespace

Engine StreamFactory::stream(std::uint64_t index) const {
  std::seed_seq seq{lo32(seed_), hi32(seed_), lo32(domain_), hi32(domain_), lo32(index), hi32(index), 0x6664u};
  return Engine(seq);
}

StreamFactory StreamFactory::subdomain(std::uint64_t domain) const {
  // Mix so that nested subdomains do not collide with flat ones.
  return StreamFactory(seed_, domain_ * 0x9e3779b97f4a7c15ull + domain + 1);
}

double standard_normal(Engine& eng) {
  for (;;) {
    const double u = 2.0 * uniform01(eng) - 1.0;
    const double v = 2.0 * uniform01(eng) - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

std::vector<double> standard_normal_vector(Engine& eng, std::size_t n) {
  std::vector<double> out(n);
  for (auto& x : out) x = standard_normal(eng);
  return out;
}

}  // namespace fdstat
