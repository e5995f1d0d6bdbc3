#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gphl/checkpoint.hpp"
#include "gphl/common.hpp"
#include "gphl/grid.hpp"
#include "gphl/marginal.hpp"
#include "gphl/wavefunction.hpp"

using namespace gphl;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path(name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

WaveFunction sample_state() {
  const LatticeGrid grid(1, 8, 4.0);
  std::vector<cplx> phi(8);
  for (int i = 0; i < 8; ++i)
    phi[i] = cplx(std::cos(0.7 * i) / 3.0, std::sin(1.3 * i) / 7.0);
  WaveFunction psi = init_product_state(grid, phi, 2);
  psi.time = 0.375;
  return psi;
}

}  // namespace

TEST_CASE("checkpoint round trip restores state at single precision") {
  const WaveFunction psi = sample_state();
  TempFile file("ckpt_roundtrip.bin");
  save_checkpoint(file.path, psi);
  const WaveFunction back = load_checkpoint(file.path);

  CHECK(back.N == psi.N);
  CHECK(back.grid.dimension() == 1);
  CHECK(back.grid.points_per_axis() == 8);
  CHECK(back.grid.box_length() == 4.0);
  CHECK(back.time == 0.375);
  REQUIRE(back.amp.size() == psi.amp.size());
  for (std::size_t i = 0; i < psi.amp.size(); ++i) {
    CHECK(back.amp[i].real() == static_cast<double>(static_cast<float>(psi.amp[i].real())));
    CHECK(back.amp[i].imag() == static_cast<double>(static_cast<float>(psi.amp[i].imag())));
  }
}

TEST_CASE("checkpoint bytes are deterministic and little-endian") {
  const WaveFunction psi = sample_state();
  TempFile a("ckpt_bytes_a.bin"), b("ckpt_bytes_b.bin");
  save_checkpoint(a.path, psi);
  save_checkpoint(b.path, psi);
  const std::string bytes = slurp(a.path);
  CHECK(bytes == slurp(b.path));

  REQUIRE(bytes.size() == 36 + psi.amp.size() * 8);
  CHECK(bytes.substr(0, 4) == "GPHL");
  const auto u32_at = [&](std::size_t off) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off + i])) << (8 * i);
    return v;
  };
  CHECK(u32_at(4) == kCheckpointVersion);
  CHECK(u32_at(8) == 2);   // N
  CHECK(u32_at(12) == 1);  // d
  CHECK(u32_at(16) == 8);  // points per axis
  // box_length 4.0 as little-endian f64: 0x4010000000000000
  CHECK(static_cast<unsigned char>(bytes[20 + 7]) == 0x40);
  CHECK(static_cast<unsigned char>(bytes[20 + 6]) == 0x10);
  for (int i = 0; i < 6; ++i) CHECK(static_cast<unsigned char>(bytes[20 + i]) == 0);
  // time 0.375 = 0x3FD8000000000000
  CHECK(static_cast<unsigned char>(bytes[28 + 7]) == 0x3f);
  CHECK(static_cast<unsigned char>(bytes[28 + 6]) == 0xd8);
}

TEST_CASE("checkpoint load rejects damaged containers") {
  const WaveFunction psi = sample_state();
  TempFile file("ckpt_damage.bin");
  save_checkpoint(file.path, psi);
  const std::string bytes = slurp(file.path);

  CHECK_THROWS_AS(load_checkpoint("ckpt_does_not_exist.bin"), DomainError);

  {
    std::ofstream out(file.path, std::ios::binary | std::ios::trunc);
    out << bytes.substr(0, bytes.size() - 5);
  }
  CHECK_THROWS_AS(load_checkpoint(file.path), DomainError);

  {
    std::ofstream out(file.path, std::ios::binary | std::ios::trunc);
    out << bytes << "xx";
  }
  CHECK_THROWS_AS(load_checkpoint(file.path), DomainError);

  {
    std::string bad = bytes;
    bad[0] = 'X';
    std::ofstream out(file.path, std::ios::binary | std::ios::trunc);
    out << bad;
  }
  CHECK_THROWS_AS(load_checkpoint(file.path), DomainError);

  {
    std::string bad = bytes;
    bad[4] = 9;  // unsupported version
    std::ofstream out(file.path, std::ios::binary | std::ios::trunc);
    out << bad;
  }
  CHECK_THROWS_AS(load_checkpoint(file.path), DomainError);
}

TEST_CASE("marginal CSV export carries every entry") {
  const LatticeGrid grid(1, 8, 2.0);
  std::vector<cplx> phi(8);
  for (int i = 0; i < 8; ++i) phi[i] = cplx(1.0 / (i + 1.0), i / 3.0);
  const MarginalKernel gamma = product_kernel(grid, phi, 1);

  TempFile file("marginal_export.csv");
  export_marginal_csv(file.path, gamma);

  std::ifstream in(file.path);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "index,re,im");
  std::size_t count = 0;
  bool checked = false;
  while (std::getline(in, line)) {
    if (count == 19) {  // row 2, col 3
      const std::size_t c1 = line.find(','), c2 = line.find(',', c1 + 1);
      CHECK(line.substr(0, c1) == "19");
      const double re = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
      const double im = std::stod(line.substr(c2 + 1));
      CHECK(re == gamma.ker(2, 3).real());
      CHECK(im == gamma.ker(2, 3).imag());
      checked = true;
    }
    ++count;
  }
  CHECK(count == 64);
  CHECK(checked);
}
