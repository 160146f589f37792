// SPDX-License-Identifier: Apache-2.0
#include "scampsim/pnm.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "scampsim/error.hpp"

namespace scampsim::pnm {
namespace {

void skip_space_and_comments(std::istream& in) {
  for (;;) {
    int ch = in.peek();
    if (ch == '#') {
      std::string line;
      std::getline(in, line);
    } else if (ch != EOF && std::isspace(ch)) {
      in.get();
    } else {
      return;
    }
  }
}

int read_header_int(std::istream& in, const char* what) {
  skip_space_and_comments(in);
  int value = -1;
  if (!(in >> value) || value < 0) {
    throw Error(ErrorKind::format, std::string("bad PNM header field: ") + what);
  }
  return value;
}

void read_magic(std::istream& in, const char* expected) {
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (!in || magic[0] != expected[0] || magic[1] != expected[1]) {
    throw Error(ErrorKind::format, std::string("expected magic ") + expected);
  }
}

// Exactly one whitespace byte separates the header from the raster.
void consume_raster_separator(std::istream& in) {
  int ch = in.get();
  if (ch == EOF || !std::isspace(ch)) {
    throw Error(ErrorKind::format, "missing whitespace before raster data");
  }
}

std::ifstream open_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  return in;
}

}  // namespace

GrayImage read_pgm(std::istream& in) {
  read_magic(in, "P5");
  const int width = read_header_int(in, "width");
  const int height = read_header_int(in, "height");
  const int maxval = read_header_int(in, "maxval");
  if (maxval < 1 || maxval > 255) {
    throw Error(ErrorKind::format, "unsupported PGM maxval " + std::to_string(maxval));
  }
  consume_raster_separator(in);
  GrayImage img(height, width);
  in.read(reinterpret_cast<char*>(img.pixels.data()),
          static_cast<std::streamsize>(img.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.pixels.size())) {
    throw Error(ErrorKind::format, "truncated PGM raster");
  }
  if (maxval != 255) {
    for (auto& p : img.pixels) {
      if (p > maxval) throw Error(ErrorKind::format, "PGM sample exceeds maxval");
      p = static_cast<std::uint8_t>((p * 255 + maxval / 2) / maxval);
    }
  }
  return img;
}

GrayImage read_pgm(const std::filesystem::path& path) {
  auto in = open_binary(path);
  try {
    return read_pgm(in);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

void write_pgm(std::ostream& out, const GrayImage& img) {
  out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
}

std::string encode_pgm(const GrayImage& img) {
  std::ostringstream os(std::ios::binary);
  write_pgm(os, img);
  return os.str();
}

BitImage read_pbm(std::istream& in) {
  read_magic(in, "P4");
  const int width = read_header_int(in, "width");
  const int height = read_header_int(in, "height");
  consume_raster_separator(in);
  BitImage img(height, width);
  const std::size_t row_bytes = (static_cast<std::size_t>(width) + 7) / 8;
  std::vector<std::uint8_t> row(row_bytes);
  for (int r = 0; r < height; ++r) {
    in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row_bytes));
    if (in.gcount() != static_cast<std::streamsize>(row_bytes)) {
      throw Error(ErrorKind::format, "truncated PBM raster");
    }
    for (int c = 0; c < width; ++c) {
      img.at(r, c) = (row[c / 8] >> (7 - c % 8)) & 1;
    }
  }
  return img;
}

BitImage read_pbm(const std::filesystem::path& path) {
  auto in = open_binary(path);
  try {
    return read_pbm(in);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

void write_pbm(std::ostream& out, const BitImage& img) {
  out << "P4\n" << img.width << ' ' << img.height << '\n';
  const std::size_t row_bytes = (static_cast<std::size_t>(img.width) + 7) / 8;
  std::vector<std::uint8_t> row(row_bytes);
  for (int r = 0; r < img.height; ++r) {
    std::fill(row.begin(), row.end(), 0);
    for (int c = 0; c < img.width; ++c) {
      if (img.at(r, c)) row[c / 8] |= static_cast<std::uint8_t>(0x80 >> (c % 8));
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row_bytes));
  }
}

std::string encode_pbm(const BitImage& img) {
  std::ostringstream os(std::ios::binary);
  write_pbm(os, img);
  return os.str();
}

int analog_offset(AnalogMode mode) { return mode == AnalogMode::saturating ? 128 : 0; }

GrayImage analog_to_gray(const AnalogPlane& plane) {
  const auto& g = plane.geometry();
  GrayImage img(g.height, g.width);
  const std::int64_t offset = analog_offset(plane.mode());
  auto v = plane.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    img.pixels[i] = static_cast<std::uint8_t>(std::clamp<std::int64_t>(v[i] + offset, 0, 255));
  }
  return img;
}

AnalogPlane gray_to_analog(const GrayImage& img, const PlaneGeometry& geometry, AnalogMode mode,
                           SaturationRange range) {
  if (img.height != geometry.height || img.width != geometry.width) {
    throw Error(ErrorKind::geometry, "PGM size does not match plane geometry");
  }
  AnalogPlane plane(geometry, mode, range);
  const std::int64_t offset = analog_offset(mode);
  auto v = plane.values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = plane.clamp(img.pixels[i] - offset);
  return plane;
}

}  // namespace scampsim::pnm
