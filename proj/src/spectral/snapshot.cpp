#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "sqgad/error.hpp"
#include "sqgad/spectral.hpp"

namespace sqgad::spectral {

namespace {

constexpr char kMagic[4] = {'S', 'Q', 'G', 'F'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kEndianTag = 0x01020304;
constexpr std::size_t kHeaderBytes = 4 + 4 * 4 + 3 * 8;

void put_u32(std::vector<char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::vector<char>& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Reader {
 public:
  explicit Reader(std::span<const char> bytes) : bytes_(bytes) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }

  double f64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return std::bit_cast<double>(v);
  }

  void magic() {
    need(4);
    require(std::memcmp(bytes_.data(), kMagic, 4) == 0, ErrorCode::Io,
            "not a field snapshot (bad magic)");
    pos_ += 4;
  }

 private:
  void need(std::size_t n) const {
    require(pos_ + n <= bytes_.size(), ErrorCode::Io, "truncated field snapshot");
  }

  std::span<const char> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<char> encode_snapshot(const SpectralField& f) {
  const GridSpec& g = f.grid();
  std::vector<char> out;
  out.reserve(kHeaderBytes + 16 * g.size());
  out.insert(out.end(), kMagic, kMagic + 4);
  put_u32(out, kVersion);
  put_u32(out, kEndianTag);
  put_u32(out, static_cast<std::uint32_t>(g.n1));
  put_u32(out, static_cast<std::uint32_t>(g.n2));
  put_f64(out, g.l1);
  put_f64(out, g.l2);
  put_f64(out, g.dealias_fraction);
  for (const Complex& c : f.coeffs()) {
    put_f64(out, c.real());
    put_f64(out, c.imag());
  }
  return out;
}

SpectralField decode_snapshot(std::span<const char> bytes) {
  Reader in(bytes);
  in.magic();
  const auto version = in.u32();
  require(version == kVersion, ErrorCode::Io,
          "unsupported snapshot version " + std::to_string(version));
  require(in.u32() == kEndianTag, ErrorCode::Io, "snapshot endianness tag mismatch");
  GridSpec g;
  g.n1 = static_cast<int>(in.u32());
  g.n2 = static_cast<int>(in.u32());
  g.l1 = in.f64();
  g.l2 = in.f64();
  g.dealias_fraction = in.f64();
  g.validate();
  require(bytes.size() == kHeaderBytes + 16 * g.size(), ErrorCode::Io,
          "snapshot payload size does not match its header");
  std::vector<Complex> coeffs(g.size());
  for (auto& c : coeffs) {
    const double re = in.f64();
    c = Complex(re, in.f64());
  }
  return SpectralField(g, std::move(coeffs));
}

void write_snapshot(const SpectralField& f, const std::string& path) {
  const auto bytes = encode_snapshot(f);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorCode::Io, "cannot open " + tmp);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    require(static_cast<bool>(out), ErrorCode::Io, "write failed for " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  require(!ec, ErrorCode::Io, "cannot rename " + tmp + ": " + ec.message());
}

SpectralField read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::Io, "cannot open " + path);
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  return decode_snapshot(bytes);
}

}  // namespace sqgad::spectral
