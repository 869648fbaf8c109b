#pragma once

#include <cstdint>
#include <string>

#include "inrfort/dataset.hpp"

namespace inrfort {

// RIFF/WAVE, PCM (format 1), 16-bit, mono. Unknown chunks are skipped.
// Sample s maps to target s/32768; coords are the sample indices mapped to
// [-1, 1]. Non-PCM data, multi-channel files and malformed chunks raise
// IoError with distinct messages.
CoordinateDataset load_audio_wav(const std::string& path);

// Writes mono PCM16. samples is [N x 1] in [-1, 1]; values quantize by
// round(v * 32768) clamped to the int16 range, the inverse of the loader's
// s/32768 mapping.
void save_audio_wav(const Matrix& samples, const std::string& path,
                    std::uint32_t sample_rate);

}  // namespace inrfort
