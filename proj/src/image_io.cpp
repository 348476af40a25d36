#include "rotkit/image_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

static_assert(std::endian::native == std::endian::little,
              "raw float and model formats assume a little-endian host");

namespace rotkit {

namespace {

void put_u32_be(std::string& s, uint32_t v) {
  s.push_back(static_cast<char>((v >> 24) & 0xff));
  s.push_back(static_cast<char>((v >> 16) & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
  s.push_back(static_cast<char>(v & 0xff));
}

uint32_t get_u32_be(const unsigned char* p) {
  return (static_cast<uint32_t>(p[0]) << 24) | (static_cast<uint32_t>(p[1]) << 16) |
         (static_cast<uint32_t>(p[2]) << 8) | static_cast<uint32_t>(p[3]);
}

void append_chunk(std::string& out, const char type[4], const std::string& payload) {
  put_u32_be(out, static_cast<uint32_t>(payload.size()));
  std::string body(type, 4);
  body += payload;
  out += body;
  uLong crc = crc32(0L, reinterpret_cast<const Bytef*>(body.data()),
                    static_cast<uInt>(body.size()));
  put_u32_be(out, static_cast<uint32_t>(crc));
}

int paeth(int a, int b, int c) {
  int p = a + b - c;
  int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return a;
  if (pb <= pc) return b;
  return c;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open file: " + path);
  std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return bytes;
}

const unsigned char kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

}  // namespace

void write_png(const std::string& path, const RasterImage& img) {
  img.check_shape();
  if (img.empty()) throw std::invalid_argument("write_png: empty image");

  const int ch = img.channels;
  const size_t stride = static_cast<size_t>(img.width) * ch;
  std::vector<unsigned char> raw((stride + 1) * img.height);
  size_t pos = 0;
  for (int y = 0; y < img.height; ++y) {
    raw[pos++] = 0;  // filter: none
    for (int x = 0; x < img.width; ++x) {
      for (int c = 0; c < ch; ++c) {
        float v = std::clamp(img.at(x, y, c), 0.0f, 1.0f);
        raw[pos++] = static_cast<unsigned char>(std::lround(v * 255.0f));
      }
    }
  }

  uLongf bound = compressBound(static_cast<uLong>(raw.size()));
  std::vector<unsigned char> compressed(bound);
  if (compress2(compressed.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), 6) !=
      Z_OK) {
    throw std::runtime_error("write_png: deflate failed");
  }

  std::string ihdr;
  put_u32_be(ihdr, static_cast<uint32_t>(img.width));
  put_u32_be(ihdr, static_cast<uint32_t>(img.height));
  ihdr.push_back(8);                      // bit depth
  ihdr.push_back(ch == 1 ? 0 : 2);        // color type: gray / truecolor
  ihdr.push_back(0);                      // compression
  ihdr.push_back(0);                      // filter
  ihdr.push_back(0);                      // interlace

  std::string out(reinterpret_cast<const char*>(kPngSignature), 8);
  append_chunk(out, "IHDR", ihdr);
  append_chunk(out, "IDAT",
               std::string(reinterpret_cast<const char*>(compressed.data()), bound));
  append_chunk(out, "IEND", "");

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("write_png: cannot open " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw std::runtime_error("write_png: short write to " + path);
}

RasterImage read_png(const std::string& path) {
  std::string bytes = read_file(path);
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kPngSignature, 8) != 0) {
    throw std::runtime_error("read_png: not a PNG file: " + path);
  }

  uint32_t width = 0, height = 0;
  int channels = 0;
  bool have_ihdr = false;
  std::string idat;

  size_t pos = 8;
  while (pos + 12 <= bytes.size()) {
    const unsigned char* p = reinterpret_cast<const unsigned char*>(bytes.data() + pos);
    uint32_t len = get_u32_be(p);
    if (pos + 12 + len > bytes.size()) throw std::runtime_error("read_png: truncated chunk");
    std::string type = bytes.substr(pos + 4, 4);
    const char* payload = bytes.data() + pos + 8;
    if (type == "IHDR") {
      const unsigned char* q = reinterpret_cast<const unsigned char*>(payload);
      width = get_u32_be(q);
      height = get_u32_be(q + 4);
      int depth = q[8], color = q[9], interlace = q[12];
      if (depth != 8 || (color != 0 && color != 2) || interlace != 0) {
        throw std::runtime_error("read_png: only 8-bit gray/RGB non-interlaced supported");
      }
      channels = color == 0 ? 1 : 3;
      have_ihdr = true;
    } else if (type == "IDAT") {
      idat.append(payload, len);
    } else if (type == "IEND") {
      break;
    }
    pos += 12 + len;
  }
  if (!have_ihdr || idat.empty() || width == 0 || height == 0) {
    throw std::runtime_error("read_png: missing IHDR/IDAT");
  }

  const size_t stride = static_cast<size_t>(width) * channels;
  std::vector<unsigned char> raw((stride + 1) * height);
  uLongf raw_len = static_cast<uLongf>(raw.size());
  int rc = uncompress(raw.data(), &raw_len, reinterpret_cast<const Bytef*>(idat.data()),
                      static_cast<uLong>(idat.size()));
  if (rc != Z_OK || raw_len != raw.size()) {
    throw std::runtime_error("read_png: inflate failed");
  }

  // Undo per-row filters.
  const int bpp = channels;  // bytes per pixel at depth 8
  std::vector<unsigned char> prev(stride, 0);
  RasterImage img = RasterImage::make(static_cast<int>(width), static_cast<int>(height),
                                      channels);
  for (uint32_t y = 0; y < height; ++y) {
    unsigned char* row = raw.data() + y * (stride + 1);
    int filter = row[0];
    unsigned char* cur = row + 1;
    for (size_t i = 0; i < stride; ++i) {
      int a = i >= static_cast<size_t>(bpp) ? cur[i - bpp] : 0;
      int b = prev[i];
      int c = i >= static_cast<size_t>(bpp) ? prev[i - bpp] : 0;
      int x = cur[i];
      switch (filter) {
        case 0: break;
        case 1: x += a; break;
        case 2: x += b; break;
        case 3: x += (a + b) / 2; break;
        case 4: x += paeth(a, b, c); break;
        default: throw std::runtime_error("read_png: bad filter type");
      }
      cur[i] = static_cast<unsigned char>(x & 0xff);
    }
    std::copy(cur, cur + stride, prev.begin());
    for (uint32_t x = 0; x < width; ++x) {
      for (int c = 0; c < channels; ++c) {
        img.at(static_cast<int>(x), static_cast<int>(y), c) = cur[x * channels + c] / 255.0f;
      }
    }
  }
  return img;
}

void write_raw_float(const std::string& path, const RasterImage& img) {
  img.check_shape();
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("write_raw_float: cannot open " + path);
  f << img.width << " " << img.height << " " << img.channels << "\n";
  f.write(reinterpret_cast<const char*>(img.data.data()),
          static_cast<std::streamsize>(img.data.size() * sizeof(float)));
  if (!f) throw std::runtime_error("write_raw_float: short write to " + path);
}

RasterImage read_raw_float(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("read_raw_float: cannot open " + path);
  int w = 0, h = 0, c = 0;
  f >> w >> h >> c;
  if (!f || w <= 0 || h <= 0 || (c != 1 && c != 3)) {
    throw std::runtime_error("read_raw_float: bad header in " + path);
  }
  f.get();  // consume the newline after the header
  RasterImage img = RasterImage::make(w, h, c);
  f.read(reinterpret_cast<char*>(img.data.data()),
         static_cast<std::streamsize>(img.data.size() * sizeof(float)));
  if (f.gcount() != static_cast<std::streamsize>(img.data.size() * sizeof(float))) {
    throw std::runtime_error("read_raw_float: truncated payload in " + path);
  }
  return img;
}

}  // namespace rotkit
