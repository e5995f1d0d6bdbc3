#include "gphl/checkpoint.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <vector>

namespace gphl {
namespace {

constexpr char kMagic[4] = {'G', 'P', 'H', 'L'};
constexpr std::size_t kHeaderBytes = 4 + 4 * 4 + 2 * 8;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

void put_f64(std::string& out, double v) {
  const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xffu));
}

void put_f32(std::string& out, float v) {
  const std::uint32_t bits = std::bit_cast<std::uint32_t>(v);
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xffu));
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}

double get_f64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

float get_f32(const unsigned char* p) {
  return std::bit_cast<float>(get_u32(p));
}

}  // namespace

void save_checkpoint(const std::string& path, const WaveFunction& psi) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DomainError("cannot open checkpoint for writing: " + path);

  std::string header;
  header.reserve(kHeaderBytes);
  header.append(kMagic, 4);
  put_u32(header, kCheckpointVersion);
  put_u32(header, static_cast<std::uint32_t>(psi.N));
  put_u32(header, static_cast<std::uint32_t>(psi.grid.dimension()));
  put_u32(header, static_cast<std::uint32_t>(psi.grid.points_per_axis()));
  put_f64(header, psi.grid.box_length());
  put_f64(header, psi.time);
  out.write(header.data(), static_cast<std::streamsize>(header.size()));

  std::string chunk;
  chunk.reserve(1 << 20);
  for (const cplx& a : psi.amp) {
    put_f32(chunk, static_cast<float>(a.real()));
    put_f32(chunk, static_cast<float>(a.imag()));
    if (chunk.size() >= (1 << 20)) {
      out.write(chunk.data(), static_cast<std::streamsize>(chunk.size()));
      chunk.clear();
    }
  }
  if (!chunk.empty()) out.write(chunk.data(), static_cast<std::streamsize>(chunk.size()));
  if (!out) throw DomainError("checkpoint write failed: " + path);
}

WaveFunction load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open checkpoint: " + path);

  unsigned char header[kHeaderBytes];
  in.read(reinterpret_cast<char*>(header), kHeaderBytes);
  if (in.gcount() != static_cast<std::streamsize>(kHeaderBytes))
    throw DomainError("checkpoint truncated: " + path);
  for (int i = 0; i < 4; ++i)
    if (static_cast<char>(header[i]) != kMagic[i])
      throw DomainError("checkpoint magic mismatch: " + path);
  const std::uint32_t version = get_u32(header + 4);
  if (version != kCheckpointVersion)
    throw DomainError("unsupported checkpoint version " + std::to_string(version));
  const std::uint32_t N = get_u32(header + 8);
  const std::uint32_t d = get_u32(header + 12);
  const std::uint32_t points = get_u32(header + 16);
  const double box_length = get_f64(header + 20);
  const double time = get_f64(header + 28);
  if (N < 1 || N > 8) throw DomainError("checkpoint particle count out of range");

  WaveFunction psi;
  psi.N = static_cast<int>(N);
  psi.grid = LatticeGrid(static_cast<int>(d), points, box_length);
  psi.time = time;
  const int axes = psi.axes();
  std::size_t total = 1;
  for (int a = 0; a < axes; ++a) total *= points;
  require_within_budget(static_cast<std::uint64_t>(total) * sizeof(cplx), memory_budget_bytes(),
                        "checkpoint state");
  psi.amp.resize(total);

  std::vector<unsigned char> buf(total * 8);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (in.gcount() != static_cast<std::streamsize>(buf.size()))
    throw DomainError("checkpoint truncated: " + path);
  if (in.peek() != std::ifstream::traits_type::eof())
    throw DomainError("checkpoint has trailing bytes: " + path);
  for (std::size_t i = 0; i < total; ++i)
    psi.amp[i] = cplx(get_f32(buf.data() + 8 * i), get_f32(buf.data() + 8 * i + 4));
  return psi;
}

void export_marginal_csv(const std::string& path, const MarginalKernel& gamma,
                         const std::string& comment) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DomainError("cannot open CSV for writing: " + path);
  if (!comment.empty()) out << "# " << comment << '\n';
  out << "index,re,im\n";
  const std::size_t rows = gamma.rows();
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < rows; ++c) {
      const cplx v = gamma.ker(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      out << r * rows + c << ',' << fmt_double(v.real()) << ',' << fmt_double(v.imag()) << '\n';
    }
  if (!out) throw DomainError("CSV write failed: " + path);
}

}  // namespace gphl
