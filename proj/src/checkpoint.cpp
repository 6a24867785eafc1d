#include "epsh/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "epsh/errors.hpp"

namespace epsh {

static_assert(std::endian::native == std::endian::little,
              "checkpoint layout assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'E', 'P', 'S', 'H'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

void put_array(std::ofstream& out, const std::vector<double>& a) {
  out.write(reinterpret_cast<const char*>(a.data()),
            static_cast<std::streamsize>(a.size() * sizeof(double)));
}

void get_array(std::ifstream& in, std::vector<double>& a, std::size_t n) {
  a.resize(n);
  in.read(reinterpret_cast<char*>(a.data()),
          static_cast<std::streamsize>(n * sizeof(double)));
}

}  // namespace

void write_checkpoint(const std::string& path, const FieldState& s,
                      const Grid& g, std::uint64_t step) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  out.write(kMagic, 4);
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.dim));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(g.n1));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(g.dim == 2 ? g.n2 : 0));
  put<double>(out, g.L1);
  put<double>(out, g.dim == 2 ? g.L2 : 0.0);
  put<double>(out, s.t);
  put<std::uint64_t>(out, step);
  put_array(out, s.psi);
  put_array(out, s.eta1);
  if (g.dim == 2) put_array(out, s.eta2);
  put_array(out, s.zeta);
  put_array(out, s.sigma);
  if (!out) throw ConfigError("short write to " + path);
}

CheckpointInfo read_checkpoint(const std::string& path, const Grid& g,
                               FieldState& s) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw ConfigError(path + " is not a checkpoint file");
  if (get<std::uint32_t>(in) != kVersion)
    throw ConfigError("unsupported checkpoint version in " + path);
  const auto dim = get<std::uint32_t>(in);
  const auto n1 = get<std::uint64_t>(in);
  const auto n2 = get<std::uint64_t>(in);
  const double L1 = get<double>(in);
  const double L2 = get<double>(in);
  if (static_cast<int>(dim) != g.dim || static_cast<int>(n1) != g.n1 ||
      (g.dim == 2 && static_cast<int>(n2) != g.n2) || L1 != g.L1 ||
      (g.dim == 2 && L2 != g.L2))
    throw ConfigError("checkpoint grid does not match the configuration");

  s.dim = g.dim;
  s.t = get<double>(in);
  CheckpointInfo info;
  info.step = get<std::uint64_t>(in);
  get_array(in, s.psi, g.size());
  get_array(in, s.eta1, g.size());
  if (g.dim == 2)
    get_array(in, s.eta2, g.size());
  else
    s.eta2.clear();
  get_array(in, s.zeta, g.size());
  get_array(in, s.sigma, g.size());
  if (!in) throw ConfigError("checkpoint " + path + " is truncated");
  return info;
}

}  // namespace epsh
