#include "ancsim/wav_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace ancsim {

namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

static_assert(std::endian::native == std::endian::little,
              "WAV I/O assumes a little-endian host");

struct Reader {
    std::ifstream in;
    explicit Reader(const std::filesystem::path& path)
        : in(path, std::ios::binary) {}

    void read_bytes(void* dst, std::size_t n, const char* field) {
        in.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in.gcount()) != n)
            throw WavFormatError(std::string("WAV: truncated while reading ") + field);
    }

    std::uint16_t u16(const char* field) {
        std::uint16_t v;
        read_bytes(&v, 2, field);
        return v;
    }
    std::uint32_t u32(const char* field) {
        std::uint32_t v;
        read_bytes(&v, 4, field);
        return v;
    }
    void fourcc(char out[5], const char* field) {
        read_bytes(out, 4, field);
        out[4] = '\0';
    }
    void skip(std::uint32_t n, const char* field) {
        in.seekg(n, std::ios::cur);
        if (!in)
            throw WavFormatError(std::string("WAV: truncated while skipping ") + field);
    }
};

double pcm16_to_double(std::int16_t v) { return static_cast<double>(v) / 32768.0; }

// Symmetric 1/32768 scale keeps the round-trip error within half an LSB
// everywhere except the clamped top code.
std::int16_t double_to_pcm16(double v) {
    const double scaled = std::round(v * 32768.0);
    return static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
}

void put_u16(std::ofstream& out, std::uint16_t v) {
    out.write(reinterpret_cast<const char*>(&v), 2);
}
void put_u32(std::ofstream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), 4);
}

} // namespace

SampleBuffer read_wav(const std::filesystem::path& path) {
    Reader r(path);
    if (!r.in)
        throw WavFormatError("WAV: cannot open " + path.string());

    char tag[5];
    r.fourcc(tag, "RIFF id");
    if (std::strcmp(tag, "RIFF") != 0)
        throw WavFormatError("WAV: missing RIFF id (got '" + std::string(tag) + "')");
    r.u32("RIFF size");
    r.fourcc(tag, "WAVE id");
    if (std::strcmp(tag, "WAVE") != 0)
        throw WavFormatError("WAV: missing WAVE id");

    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    bool have_fmt = false;
    std::vector<std::uint8_t> data;

    while (true) {
        r.fourcc(tag, "chunk id");
        if (!r.in)
            break;
        const std::uint32_t size = r.u32("chunk size");
        if (std::strcmp(tag, "fmt ") == 0) {
            if (size < 16)
                throw WavFormatError("WAV: fmt chunk too small");
            format = r.u16("fmt.format");
            channels = r.u16("fmt.channels");
            rate = r.u32("fmt.sample_rate");
            r.u32("fmt.byte_rate");
            r.u16("fmt.block_align");
            bits = r.u16("fmt.bits_per_sample");
            if (size > 16) {
                if (format == kFormatExtensible && size >= 40) {
                    r.u16("fmt.ext_size");
                    r.u16("fmt.valid_bits");
                    r.u32("fmt.channel_mask");
                    format = r.u16("fmt.sub_format");
                    r.skip(size - 26, "fmt extension tail");
                } else {
                    r.skip(size - 16, "fmt extension");
                }
            }
            have_fmt = true;
        } else if (std::strcmp(tag, "data") == 0) {
            data.resize(size);
            if (size > 0)
                r.read_bytes(data.data(), size, "data payload");
            break;
        } else {
            // padded to even size
            r.skip(size + (size & 1), tag);
        }
        if (r.in.peek() == EOF)
            break;
    }

    if (!have_fmt)
        throw WavFormatError("WAV: no fmt chunk before data");
    if (channels == 0)
        throw WavFormatError("WAV: fmt.channels is zero");
    if (rate == 0)
        throw WavFormatError("WAV: fmt.sample_rate is zero");

    const bool pcm16 = format == kFormatPcm && bits == 16;
    const bool f32 = format == kFormatFloat && bits == 32;
    if (!pcm16 && !f32)
        throw WavFormatError("WAV: unsupported encoding (fmt.format=" +
                             std::to_string(format) + ", fmt.bits_per_sample=" +
                             std::to_string(bits) + "); need PCM16 or float32");

    const std::size_t bytes_per_sample = bits / 8;
    const std::size_t frame_bytes = bytes_per_sample * channels;
    if (frame_bytes == 0 || data.size() % frame_bytes != 0)
        throw WavFormatError("WAV: data size is not a whole number of frames");
    const std::size_t frames = data.size() / frame_bytes;

    SampleBuffer out(static_cast<int>(rate), channels, frames);
    const std::uint8_t* p = data.data();
    for (std::size_t i = 0; i < frames; ++i) {
        for (std::size_t c = 0; c < channels; ++c) {
            if (pcm16) {
                std::int16_t v;
                std::memcpy(&v, p, 2);
                out.channels[c][i] = pcm16_to_double(v);
                p += 2;
            } else {
                float v;
                std::memcpy(&v, p, 4);
                out.channels[c][i] = static_cast<double>(v);
                p += 4;
            }
        }
    }
    return out;
}

void write_wav(const SampleBuffer& buffer, const std::filesystem::path& path,
               WavEncoding encoding) {
    buffer.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");

    const std::uint16_t channels = static_cast<std::uint16_t>(buffer.channel_count());
    const std::uint32_t rate = static_cast<std::uint32_t>(buffer.sample_rate);
    const std::uint16_t bits = encoding == WavEncoding::Pcm16 ? 16 : 32;
    const std::uint16_t block_align = static_cast<std::uint16_t>(channels * bits / 8);
    const std::uint32_t data_size =
        static_cast<std::uint32_t>(buffer.frames() * block_align);

    out.write("RIFF", 4);
    put_u32(out, 36 + data_size);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    put_u32(out, 16);
    put_u16(out, encoding == WavEncoding::Pcm16 ? kFormatPcm : kFormatFloat);
    put_u16(out, channels);
    put_u32(out, rate);
    put_u32(out, rate * block_align);
    put_u16(out, block_align);
    put_u16(out, bits);
    out.write("data", 4);
    put_u32(out, data_size);

    for (std::size_t i = 0; i < buffer.frames(); ++i) {
        for (std::size_t c = 0; c < channels; ++c) {
            const double v = buffer.channels[c][i];
            if (encoding == WavEncoding::Pcm16) {
                const std::int16_t q = double_to_pcm16(v);
                out.write(reinterpret_cast<const char*>(&q), 2);
            } else {
                const float f = static_cast<float>(v);
                out.write(reinterpret_cast<const char*>(&f), 4);
            }
        }
    }
    if (!out)
        throw IoError("short write to " + path.string());
}

} // namespace ancsim
