#pragma once

#include <string>
#include <vector>

#include "inrfort/dataset.hpp"

namespace inrfort {

enum class ImageFormat { pgm, ppm };

// Binary PGM ("P5", grayscale) or PPM ("P6", RGB) with maxval 255.
// Pixel bytes map to targets by v -> 2v/255 - 1; coords come from
// make_coord_grid({H, W}). Header comments (#) are skipped. Malformed
// headers, truncated payloads and unsupported maxvals raise IoError with
// distinct messages.
CoordinateDataset load_image(const std::string& path);

// Clamp to [-1,1], quantize by round-half-up((v+1)*255/2), write binary
// PGM/PPM. outputs is [N x channels] with N = shape[0]*shape[1]; format must
// match the channel count (pgm: 1, ppm: 3).
void save_image(const Matrix& outputs, const std::vector<std::size_t>& shape,
                const std::string& path, ImageFormat format);

// Frame directory: lexicographically ordered same-size binary PPM frames.
// Coords are (t, y, x) in [-1,1]^3, targets RGB.
CoordinateDataset load_video_frames(const std::string& dir_path);

}  // namespace inrfort
