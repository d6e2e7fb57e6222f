// Copyright 2026 The PainSeq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "painseq/extractor/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "painseq/errors.hpp"
#include "painseq/log.hpp"

namespace painseq::extractor {
namespace {

// Next whitespace-delimited PPM header token, skipping '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  return tok;
}

}  // namespace

RgbImage read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot open frame " + path.string());
  if (next_token(in) != "P6") throw InvalidInputError(path.string() + ": not a binary PPM (P6)");
  std::size_t w = 0, h = 0, maxval = 0;
  try {
    w = std::stoul(next_token(in));
    h = std::stoul(next_token(in));
    maxval = std::stoul(next_token(in));
  } catch (const std::exception&) {
    throw InvalidInputError(path.string() + ": malformed PPM header");
  }
  if (w == 0 || h == 0 || maxval != 255) {
    throw InvalidInputError(path.string() + ": unsupported PPM geometry or maxval");
  }
  RgbImage img(w, h);
  in.read(reinterpret_cast<char*>(img.pixels.data()),
          static_cast<std::streamsize>(img.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.pixels.size())) {
    throw InvalidInputError(path.string() + ": truncated pixel data");
  }
  return img;
}

void write_ppm(const RgbImage& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInputError("cannot write " + path.string());
  out << "P6\n" << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
}

std::map<std::size_t, BBox> read_bbox_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open bounding-box file " + path.string());
  std::map<std::size_t, BBox> boxes;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    long long idx, x, y, w, h;
    std::string extra;
    if (!(ss >> idx >> x >> y >> w >> h) || (ss >> extra) || idx < 0) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                            ": expected \"frame_index, x, y, w, h\"",
                        line_no);
    }
    boxes[static_cast<std::size_t>(idx)] = BBox{x, y, w, h};
  }
  return boxes;
}

PreprocessResult preprocess_frame(const RgbImage& frame, const BBox& box,
                                  const PreprocessOptions& options) {
  if (box.w <= 0 || box.h <= 0) {
    throw InvalidBBoxError("bounding box has non-positive size " + std::to_string(box.w) + "x" +
                           std::to_string(box.h));
  }
  const long long fw = static_cast<long long>(frame.width);
  const long long fh = static_cast<long long>(frame.height);
  const long long x0 = std::max(box.x, 0LL);
  const long long y0 = std::max(box.y, 0LL);
  const long long x1 = std::min(box.x + box.w, fw);
  const long long y1 = std::min(box.y + box.h, fh);
  if (x1 <= x0 || y1 <= y0) {
    throw InvalidBBoxError("bounding box (" + std::to_string(box.x) + ", " +
                           std::to_string(box.y) + ", " + std::to_string(box.w) + ", " +
                           std::to_string(box.h) + ") does not overlap the " +
                           std::to_string(fw) + "x" + std::to_string(fh) + " frame");
  }
  PreprocessResult result;
  result.clamped = x0 != box.x || y0 != box.y || x1 != box.x + box.w || y1 != box.y + box.h;
  if (result.clamped) {
    logger()->warn("bounding box ({}, {}, {}, {}) clipped to the {}x{} frame", box.x, box.y,
                   box.w, box.h, fw, fh);
  }

  const std::size_t cw = static_cast<std::size_t>(x1 - x0);
  const std::size_t ch = static_cast<std::size_t>(y1 - y0);
  const std::size_t t = options.target;
  ImageTensor& img = result.image;
  img.height = t;
  img.width = t;
  img.channels = 3;
  img.data.assign(t * t * 3, 0.0f);

  const double sx = static_cast<double>(cw) / static_cast<double>(t);
  const double sy = static_cast<double>(ch) / static_cast<double>(t);
  for (std::size_t oy = 0; oy < t; ++oy) {
    const double fy = std::clamp((oy + 0.5) * sy - 0.5, 0.0, static_cast<double>(ch - 1));
    const auto iy0 = static_cast<std::size_t>(fy);
    const std::size_t iy1 = std::min(iy0 + 1, ch - 1);
    const double wy = fy - static_cast<double>(iy0);
    for (std::size_t ox = 0; ox < t; ++ox) {
      const double fx = std::clamp((ox + 0.5) * sx - 0.5, 0.0, static_cast<double>(cw - 1));
      const auto ix0 = static_cast<std::size_t>(fx);
      const std::size_t ix1 = std::min(ix0 + 1, cw - 1);
      const double wx = fx - static_cast<double>(ix0);
      for (std::size_t c = 0; c < 3; ++c) {
        auto px = [&](std::size_t yy, std::size_t xx) {
          return static_cast<double>(frame.at(static_cast<std::size_t>(y0) + yy,
                                              static_cast<std::size_t>(x0) + xx, c));
        };
        const double top = px(iy0, ix0) * (1.0 - wx) + px(iy0, ix1) * wx;
        const double bottom = px(iy1, ix0) * (1.0 - wx) + px(iy1, ix1) * wx;
        double v = (top * (1.0 - wy) + bottom * wy) / 255.0;
        if (options.normalize) v -= options.mean[c];
        img.at(oy, ox, c) = static_cast<float>(v);
      }
    }
  }
  return result;
}

}  // namespace painseq::extractor
