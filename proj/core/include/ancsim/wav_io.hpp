#pragma once

#include <filesystem>

#include "ancsim/sample_buffer.hpp"

namespace ancsim {

enum class WavEncoding { Pcm16, Float32 };

/// Reads a RIFF WAV file (PCM16 or IEEE float32, any channel count).
/// Samples map to [-1, 1] for PCM16 and pass through unscaled for float32.
SampleBuffer read_wav(const std::filesystem::path& path);

/// Writes a RIFF WAV file. PCM16 clamps to [-1, 1] before quantizing.
void write_wav(const SampleBuffer& buffer, const std::filesystem::path& path,
               WavEncoding encoding = WavEncoding::Float32);

} // namespace ancsim
