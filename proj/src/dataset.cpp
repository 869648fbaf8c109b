#include "inrfort/dataset.hpp"

#include <stdexcept>

namespace inrfort {

std::string modality_name(Modality m) {
  switch (m) {
    case Modality::image_gray: return "image_gray";
    case Modality::image_rgb: return "image_rgb";
    case Modality::audio: return "audio";
    case Modality::video: return "video";
  }
  return "unknown";
}

Matrix make_coord_grid(const std::vector<std::size_t>& shape) {
  if (shape.empty()) {
    throw std::invalid_argument("make_coord_grid: empty shape");
  }
  std::size_t n = 1;
  for (std::size_t dim : shape) {
    if (dim == 0) {
      throw std::invalid_argument("make_coord_grid: zero-sized dimension");
    }
    n *= dim;
  }
  const std::size_t n_axes = shape.size();
  Matrix coords(n, n_axes);

  std::vector<std::size_t> idx(n_axes, 0);
  for (std::size_t row = 0; row < n; ++row) {
    double* out = coords.row(row);
    for (std::size_t a = 0; a < n_axes; ++a) {
      const std::size_t dim = shape[a];
      out[a] = (dim == 1)
                   ? 0.0
                   : -1.0 + 2.0 * static_cast<double>(idx[a]) /
                                static_cast<double>(dim - 1);
    }
    // row-major increment, last axis fastest
    for (std::size_t a = n_axes; a-- > 0;) {
      if (++idx[a] < shape[a]) break;
      idx[a] = 0;
    }
  }
  return coords;
}

}  // namespace inrfort
