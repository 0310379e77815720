#include "amhd/snapshot.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "amhd/errors.hpp"

namespace amhd {

namespace {
constexpr std::array<char, 5> kMagic = {'A', 'M', 'H', 'D', '1'};

template <class T>
void put_le(std::ostream& os, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  U bits = std::bit_cast<U>(value);
  unsigned char bytes[sizeof(U)];
  for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xffu);
  os.write(reinterpret_cast<const char*>(bytes), sizeof(U));
}

template <class T>
T get_le(std::istream& is) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  unsigned char bytes[sizeof(U)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(U))) throw IoError("truncated snapshot file");
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) bits |= U(bytes[i]) << (8 * i);
  return std::bit_cast<T>(bits);
}
}  // namespace

void write_snapshot(const std::filesystem::path& path, std::span<const SpectralScalar> components, double time) {
  if (components.empty()) throw InvalidParameter("snapshot needs at least one component");
  const Grid& g = components.front().grid();
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(os, std::uint32_t(g.n1));
  put_le<std::uint32_t>(os, std::uint32_t(g.n2));
  put_le<std::uint32_t>(os, std::uint32_t(g.n3));
  put_le<std::uint32_t>(os, std::uint32_t(components.size()));
  put_le<double>(os, time);
  RealField buffer(g);
  for (const auto& c : components) {
    if (!(c.grid() == g)) throw GridMismatch();
    c.to_physical(buffer);
    for (double v : buffer.values()) put_le<double>(os, v);
  }
  if (!os) throw IoError("write failed for " + path.string());
}

void write_snapshot(const std::filesystem::path& path, const VectorField& field, double time) {
  const std::array<SpectralScalar, 3> comps = {field[0], field[1], field[2]};
  write_snapshot(path, comps, time);
}

Snapshot read_snapshot(const std::filesystem::path& path, double length) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  std::array<char, 5> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic) throw IoError(path.string() + " is not an AMHD1 snapshot");
  Snapshot snap;
  snap.grid.n1 = int(get_le<std::uint32_t>(is));
  snap.grid.n2 = int(get_le<std::uint32_t>(is));
  snap.grid.n3 = int(get_le<std::uint32_t>(is));
  snap.grid.length = length;
  const auto count = get_le<std::uint32_t>(is);
  snap.time = get_le<double>(is);
  snap.grid.validate();
  RealField buffer(snap.grid);
  for (std::uint32_t c = 0; c < count; ++c) {
    for (double& v : buffer.values()) v = get_le<double>(is);
    snap.components.push_back(SpectralScalar::from_physical(buffer));
  }
  return snap;
}

VectorField read_vector_snapshot(const std::filesystem::path& path, double* time, double length) {
  Snapshot snap = read_snapshot(path, length);
  if (snap.components.size() != 3) throw IoError(path.string() + ": expected 3 components");
  if (time != nullptr) *time = snap.time;
  return VectorField(std::move(snap.components[0]), std::move(snap.components[1]), std::move(snap.components[2]));
}

}  // namespace amhd
