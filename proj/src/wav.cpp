#include "inrfort/wav.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <vector>

#include "inrfort/errors.hpp"

namespace inrfort {

namespace {

std::uint32_t read_u32le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16le(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] |
                                    (static_cast<std::uint16_t>(p[1]) << 8));
}

void put_u32le(std::vector<unsigned char>& out, std::uint32_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 16) & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 24) & 0xff));
}

void put_u16le(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
}

}  // namespace

CoordinateDataset load_audio_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(path + ": cannot open file");
  }
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw IoError(path + ": not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t sample_rate = 0;
  const unsigned char* data_ptr = nullptr;
  std::uint32_t data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* hdr = bytes.data() + pos;
    const std::uint32_t chunk_len = read_u32le(hdr + 4);
    const std::size_t body = pos + 8;
    if (body + chunk_len > bytes.size()) {
      throw IoError(path + ": malformed chunk (length exceeds file size)");
    }
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (chunk_len < 16) {
        throw IoError(path + ": malformed fmt chunk");
      }
      const unsigned char* f = bytes.data() + body;
      format = read_u16le(f + 0);
      channels = read_u16le(f + 2);
      sample_rate = read_u32le(f + 4);
      bits = read_u16le(f + 14);
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data_ptr = bytes.data() + body;
      data_len = chunk_len;
    }
    // chunks are word-aligned; odd sizes carry a pad byte
    pos = body + chunk_len + (chunk_len & 1);
  }

  if (!have_fmt) {
    throw IoError(path + ": missing fmt chunk");
  }
  if (format != 1) {
    throw IoError(path + ": not PCM (format tag " + std::to_string(format) + ")");
  }
  if (channels != 1) {
    throw IoError(path + ": only mono supported (got " +
                  std::to_string(channels) + " channels)");
  }
  if (bits != 16) {
    throw IoError(path + ": only 16-bit PCM supported (got " +
                  std::to_string(bits) + " bits)");
  }
  if (!data_ptr) {
    throw IoError(path + ": missing data chunk");
  }
  if (data_len % 2 != 0) {
    throw IoError(path + ": malformed data chunk (odd byte count)");
  }

  const std::size_t n = data_len / 2;
  if (n == 0) {
    throw IoError(path + ": empty data chunk");
  }
  CoordinateDataset ds;
  ds.modality = Modality::audio;
  ds.sample_rate = sample_rate;
  ds.shape = {n};
  ds.coords = make_coord_grid(ds.shape);
  ds.targets = Matrix(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint16_t raw = read_u16le(data_ptr + 2 * i);
    const std::int16_t s = static_cast<std::int16_t>(raw);
    ds.targets.data[i] = static_cast<double>(s) / 32768.0;
  }
  return ds;
}

void save_audio_wav(const Matrix& samples, const std::string& path,
                    std::uint32_t sample_rate) {
  if (samples.cols != 1) {
    throw std::invalid_argument("save_audio_wav: samples must be [N x 1]");
  }
  const std::uint32_t n = static_cast<std::uint32_t>(samples.rows);
  const std::uint32_t data_len = n * 2;

  std::vector<unsigned char> out;
  out.reserve(44 + data_len);
  const char* riff = "RIFF";
  out.insert(out.end(), riff, riff + 4);
  put_u32le(out, 36 + data_len);
  const char* wavefmt = "WAVEfmt ";
  out.insert(out.end(), wavefmt, wavefmt + 8);
  put_u32le(out, 16);           // fmt chunk size
  put_u16le(out, 1);            // PCM
  put_u16le(out, 1);            // mono
  put_u32le(out, sample_rate);
  put_u32le(out, sample_rate * 2);  // byte rate
  put_u16le(out, 2);            // block align
  put_u16le(out, 16);           // bits per sample
  const char* data = "data";
  out.insert(out.end(), data, data + 4);
  put_u32le(out, data_len);
  for (std::size_t i = 0; i < samples.rows; ++i) {
    double v = samples.data[i];
    double q = std::floor(v * 32768.0 + 0.5);
    if (q > 32767.0) q = 32767.0;
    if (q < -32768.0) q = -32768.0;
    const std::int16_t s = static_cast<std::int16_t>(q);
    put_u16le(out, static_cast<std::uint16_t>(s));
  }

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

}  // namespace inrfort
