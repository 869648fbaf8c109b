#include "inrfort/netpbm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "inrfort/errors.hpp"

namespace inrfort {

namespace {

// Reads the next header token, skipping whitespace and # comments.
std::string next_token(std::istream& in, const std::string& path) {
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  if (c == EOF) {
    throw IoError(path + ": malformed netpbm header (unexpected end of file)");
  }
  std::string tok;
  while (c != EOF && !std::isspace(c)) {
    tok.push_back(static_cast<char>(c));
    c = in.get();
  }
  return tok;
}

std::size_t parse_dim(const std::string& tok, const std::string& path) {
  if (tok.empty() ||
      !std::all_of(tok.begin(), tok.end(),
                   [](unsigned char ch) { return std::isdigit(ch); })) {
    throw IoError(path + ": malformed netpbm header (bad number '" + tok + "')");
  }
  return static_cast<std::size_t>(std::stoull(tok));
}

struct RawImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t channels = 0;
  std::vector<unsigned char> bytes;
};

RawImage read_netpbm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(path + ": cannot open file");
  }
  const std::string magic = next_token(in, path);
  std::size_t channels = 0;
  if (magic == "P5") {
    channels = 1;
  } else if (magic == "P6") {
    channels = 3;
  } else {
    throw IoError(path + ": malformed netpbm header (magic '" + magic +
                  "', expected P5 or P6)");
  }
  RawImage img;
  img.channels = channels;
  img.width = parse_dim(next_token(in, path), path);
  img.height = parse_dim(next_token(in, path), path);
  const std::size_t maxval = parse_dim(next_token(in, path), path);
  if (maxval != 255) {
    throw IoError(path + ": unsupported maxval " + std::to_string(maxval) +
                  " (only 255 supported)");
  }
  if (img.width == 0 || img.height == 0) {
    throw IoError(path + ": malformed netpbm header (zero dimension)");
  }
  // The single whitespace byte after maxval was already consumed by the
  // token reader; payload starts here.
  const std::size_t n_bytes = img.width * img.height * channels;
  img.bytes.resize(n_bytes);
  in.read(reinterpret_cast<char*>(img.bytes.data()),
          static_cast<std::streamsize>(n_bytes));
  if (static_cast<std::size_t>(in.gcount()) != n_bytes) {
    throw IoError(path + ": truncated pixel payload (expected " +
                  std::to_string(n_bytes) + " bytes, got " +
                  std::to_string(in.gcount()) + ")");
  }
  return img;
}

double byte_to_target(unsigned char v) {
  return 2.0 * static_cast<double>(v) / 255.0 - 1.0;
}

unsigned char target_to_byte(double v) {
  v = std::clamp(v, -1.0, 1.0);
  // round-half-up quantization to 0..255
  const double scaled = (v + 1.0) * 255.0 / 2.0;
  double q = std::floor(scaled + 0.5);
  if (q < 0.0) q = 0.0;
  if (q > 255.0) q = 255.0;
  return static_cast<unsigned char>(q);
}

}  // namespace

CoordinateDataset load_image(const std::string& path) {
  const RawImage img = read_netpbm(path);
  CoordinateDataset ds;
  ds.shape = {img.height, img.width};
  ds.modality = (img.channels == 1) ? Modality::image_gray : Modality::image_rgb;
  ds.coords = make_coord_grid(ds.shape);
  ds.targets = Matrix(img.height * img.width, img.channels);
  for (std::size_t i = 0; i < img.bytes.size(); ++i) {
    ds.targets.data[i] = byte_to_target(img.bytes[i]);
  }
  return ds;
}

void save_image(const Matrix& outputs, const std::vector<std::size_t>& shape,
                const std::string& path, ImageFormat format) {
  if (shape.size() != 2) {
    throw std::invalid_argument("save_image: shape must be {H, W}");
  }
  const std::size_t channels = (format == ImageFormat::pgm) ? 1 : 3;
  if (outputs.cols != channels) {
    throw std::invalid_argument("save_image: output channels do not match format");
  }
  if (outputs.rows != shape[0] * shape[1]) {
    throw std::invalid_argument("save_image: output rows do not match shape");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError(path + ": cannot open file for writing");
  }
  out << (format == ImageFormat::pgm ? "P5" : "P6") << "\n"
      << shape[1] << " " << shape[0] << "\n255\n";
  std::vector<unsigned char> bytes(outputs.data.size());
  for (std::size_t i = 0; i < outputs.data.size(); ++i) {
    bytes[i] = target_to_byte(outputs.data[i]);
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw IoError(path + ": write failed");
  }
}

CoordinateDataset load_video_frames(const std::string& dir_path) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir_path)) {
    throw IoError(dir_path + ": not a directory");
  }
  std::vector<std::string> frames;
  for (const auto& entry : fs::directory_iterator(dir_path)) {
    if (entry.is_regular_file() && entry.path().extension() == ".ppm") {
      frames.push_back(entry.path().string());
    }
  }
  if (frames.empty()) {
    throw IoError(dir_path + ": no .ppm frames found");
  }
  std::sort(frames.begin(), frames.end());

  CoordinateDataset ds;
  ds.modality = Modality::video;
  std::size_t height = 0, width = 0;
  std::vector<double> targets;
  for (std::size_t t = 0; t < frames.size(); ++t) {
    const RawImage img = read_netpbm(frames[t]);
    if (img.channels != 3) {
      throw IoError(frames[t] + ": video frames must be PPM (P6)");
    }
    if (t == 0) {
      height = img.height;
      width = img.width;
      targets.reserve(frames.size() * height * width * 3);
    } else if (img.height != height || img.width != width) {
      throw IoError(frames[t] + ": frame size " + std::to_string(img.width) +
                    "x" + std::to_string(img.height) +
                    " inconsistent with first frame " + std::to_string(width) +
                    "x" + std::to_string(height));
    }
    for (unsigned char b : img.bytes) targets.push_back(byte_to_target(b));
  }
  ds.shape = {frames.size(), height, width};
  ds.coords = make_coord_grid(ds.shape);
  ds.targets = Matrix(frames.size() * height * width, 3);
  ds.targets.data = std::move(targets);
  return ds;
}

}  // namespace inrfort
