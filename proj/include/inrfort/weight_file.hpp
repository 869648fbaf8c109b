#pragma once

#include <string>

#include "inrfort/siren.hpp"

namespace inrfort {

enum class WeightDtype { f32, f64 };

// Binary weight file, fixed little-endian layout:
//   offset  0  8 bytes  magic "INRFORT1"
//           8  u32      in_dim
//          12  u32      out_dim
//          16  u32      hidden_width
//          20  u32      hidden_layers
//          24  f64      omega_first
//          32  f64      omega_hidden
//          40  u32      dtype (0 = f32, 1 = f64)
//          44  payload  d * (4|8) bytes, IEEE754, flatten order
//        end-8  u64     FNV-1a 64 checksum over all preceding bytes
// f64 round-trips bit-exactly; f32 rounds each value to single precision.
// Bad magic, checksum mismatch and truncation raise distinct IoError
// messages on load.
void save_weights(const MlpParams& params, const std::string& path,
                  WeightDtype dtype);

MlpParams load_weights(const std::string& path);

}  // namespace inrfort
