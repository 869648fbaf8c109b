#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "inrfort/linalg.hpp"

namespace inrfort {

enum class Modality { image_gray, image_rgb, audio, video };

std::string modality_name(Modality m);

// Paired coordinates in [-1,1]^n and targets in [-1,1]^m over a regular grid.
// N (= coords.rows) equals the product of the shape dims. Grid enumeration is
// row-major with the last axis fastest; for video the axis order is (t, y, x).
struct CoordinateDataset {
  Matrix coords;
  Matrix targets;
  std::vector<std::size_t> shape;
  Modality modality = Modality::image_gray;
  std::uint32_t sample_rate = 0;  // audio only, Hz; 0 otherwise

  std::size_t size() const { return coords.rows; }
};

// Regular grid over the given dims, each axis mapped linearly to [-1, 1]
// (a single-element axis maps to 0). Throws std::invalid_argument on a
// zero dim.
Matrix make_coord_grid(const std::vector<std::size_t>& shape);

}  // namespace inrfort
