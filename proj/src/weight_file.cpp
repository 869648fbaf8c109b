#include "inrfort/weight_file.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

#include "inrfort/errors.hpp"

namespace inrfort {

namespace {

constexpr char kMagic[8] = {'I', 'N', 'R', 'F', 'O', 'R', 'T', '1'};
constexpr std::size_t kHeaderSize = 44;

std::uint64_t fnv1a64(const unsigned char* data, std::size_t len) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= data[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

void put_u32le(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_u64le(std::vector<unsigned char>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_f64le(std::vector<unsigned char>& out, double v) {
  put_u64le(out, std::bit_cast<std::uint64_t>(v));
}

void put_f32le(std::vector<unsigned char>& out, float v) {
  put_u32le(out, std::bit_cast<std::uint32_t>(v));
}

std::uint32_t get_u32le(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

std::uint64_t get_u64le(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

}  // namespace

void save_weights(const MlpParams& params, const std::string& path,
                  WeightDtype dtype) {
  params.config.validate();
  const Vector theta = flatten(params);

  std::vector<unsigned char> out;
  out.reserve(kHeaderSize + theta.size() * 8 + 8);
  out.insert(out.end(), kMagic, kMagic + 8);
  put_u32le(out, static_cast<std::uint32_t>(params.config.in_dim));
  put_u32le(out, static_cast<std::uint32_t>(params.config.out_dim));
  put_u32le(out, static_cast<std::uint32_t>(params.config.hidden_width));
  put_u32le(out, static_cast<std::uint32_t>(params.config.hidden_layers));
  put_f64le(out, params.config.omega_first);
  put_f64le(out, params.config.omega_hidden);
  put_u32le(out, dtype == WeightDtype::f32 ? 0u : 1u);

  if (dtype == WeightDtype::f32) {
    for (double v : theta) put_f32le(out, static_cast<float>(v));
  } else {
    for (double v : theta) put_f64le(out, v);
  }
  put_u64le(out, fnv1a64(out.data(), out.size()));

  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw IoError(path + ": cannot open file for writing");
  }
  f.write(reinterpret_cast<const char*>(out.data()),
          static_cast<std::streamsize>(out.size()));
  if (!f) {
    throw IoError(path + ": write failed");
  }
}

MlpParams load_weights(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(path + ": cannot open file");
  }
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < kHeaderSize + 8) {
    throw IoError(path + ": truncated weight file (header incomplete)");
  }
  if (std::memcmp(bytes.data(), kMagic, 8) != 0) {
    throw IoError(path + ": bad magic (not an INRFORT1 weight file)");
  }

  SirenConfig cfg;
  cfg.in_dim = get_u32le(bytes.data() + 8);
  cfg.out_dim = get_u32le(bytes.data() + 12);
  cfg.hidden_width = get_u32le(bytes.data() + 16);
  cfg.hidden_layers = get_u32le(bytes.data() + 20);
  cfg.omega_first = std::bit_cast<double>(get_u64le(bytes.data() + 24));
  cfg.omega_hidden = std::bit_cast<double>(get_u64le(bytes.data() + 32));
  const std::uint32_t dtype_flag = get_u32le(bytes.data() + 40);
  if (dtype_flag > 1) {
    throw IoError(path + ": unknown dtype flag " + std::to_string(dtype_flag));
  }
  cfg.validate();

  const std::size_t d = cfg.param_count();
  const std::size_t value_size = (dtype_flag == 0) ? 4 : 8;
  const std::size_t expected = kHeaderSize + d * value_size + 8;
  if (bytes.size() != expected) {
    throw IoError(path + ": truncated weight file (expected " +
                  std::to_string(expected) + " bytes, got " +
                  std::to_string(bytes.size()) + ")");
  }

  const std::uint64_t stored = get_u64le(bytes.data() + bytes.size() - 8);
  const std::uint64_t computed = fnv1a64(bytes.data(), bytes.size() - 8);
  if (stored != computed) {
    throw IoError(path + ": checksum mismatch");
  }

  Vector theta(d);
  const unsigned char* payload = bytes.data() + kHeaderSize;
  if (dtype_flag == 0) {
    for (std::size_t i = 0; i < d; ++i) {
      theta[i] = static_cast<double>(
          std::bit_cast<float>(get_u32le(payload + 4 * i)));
    }
  } else {
    for (std::size_t i = 0; i < d; ++i) {
      theta[i] = std::bit_cast<double>(get_u64le(payload + 8 * i));
    }
  }
  return unflatten(cfg, theta);
}

}  // namespace inrfort
