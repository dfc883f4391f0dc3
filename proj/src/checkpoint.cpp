#include "pkrg/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace pkrg {

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'P', 'K', 'R', 'G'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_raw(std::ostream& os, const T& value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_raw(std::istream& is) {
  T value;
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!is) throw CheckpointError("checkpoint truncated");
  return value;
}

}  // namespace

void save_checkpoint(const std::string& path, const SpectralField& f, Real time, Real alpha) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw CheckpointError("cannot open " + path + " for writing");
  os.write(kMagic, 4);
  write_raw(os, kVersion);
  write_raw(os, static_cast<std::uint32_t>(f.grid.n()));
  write_raw(os, static_cast<double>(f.grid.period()));
  write_raw(os, static_cast<double>(time));
  write_raw(os, static_cast<double>(alpha));
  std::vector<float> buf(2 * f.grid.size());
  for (int c = 0; c < 3; ++c) {
    for (Eigen::Index i = 0; i < f.grid.size(); ++i) {
      buf[2 * i] = static_cast<float>(f.comp[c][i].real());
      buf[2 * i + 1] = static_cast<float>(f.comp[c][i].imag());
    }
    os.write(reinterpret_cast<const char*>(buf.data()),
             static_cast<std::streamsize>(buf.size() * sizeof(float)));
  }
  if (!os) throw CheckpointError("write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw CheckpointError("cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw CheckpointError(path + ": bad magic, not a PKRG checkpoint");
  const auto version = read_raw<std::uint32_t>(is);
  if (version != kVersion)
    throw CheckpointError(path + ": unsupported version " + std::to_string(version));
  const auto n = read_raw<std::uint32_t>(is);
  const auto period = read_raw<double>(is);

  Checkpoint cp;
  cp.time = read_raw<double>(is);
  cp.alpha = read_raw<double>(is);
  cp.field = SpectralField(FrequencyGrid(static_cast<int>(n), period));
  std::vector<float> buf(2 * cp.field.grid.size());
  for (int c = 0; c < 3; ++c) {
    is.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (!is) throw CheckpointError(path + ": truncated coefficient block");
    for (Eigen::Index i = 0; i < cp.field.grid.size(); ++i)
      cp.field.comp[c][i] = Complex(buf[2 * i], buf[2 * i + 1]);
  }
  return cp;
}

}  // namespace pkrg
