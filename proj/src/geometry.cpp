#include "rotkit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rotkit {

namespace {

// Bilinear sample at continuous coordinates (pixel centers at i + 0.5).
// Taps outside the image contribute 0, which makes out-of-source regions
// after a rotation come out black.
float sample_bilinear(const RasterImage& img, double u, double v, int c) {
  double x = u - 0.5;
  double y = v - 0.5;
  int x0 = static_cast<int>(std::floor(x));
  int y0 = static_cast<int>(std::floor(y));
  double fx = x - x0;
  double fy = y - y0;
  double acc = 0.0;
  for (int dy = 0; dy <= 1; ++dy) {
    int yi = y0 + dy;
    if (yi < 0 || yi >= img.height) continue;
    double wy = dy ? fy : 1.0 - fy;
    for (int dx = 0; dx <= 1; ++dx) {
      int xi = x0 + dx;
      if (xi < 0 || xi >= img.width) continue;
      double wx = dx ? fx : 1.0 - fx;
      acc += wx * wy * img.at(xi, yi, c);
    }
  }
  return static_cast<float>(acc);
}

// Edge-clamped variant for plain resampling, where the half-pixel border
// band must not fade toward zero.
float sample_bilinear_clamped(const RasterImage& img, double u, double v, int c) {
  double x = u - 0.5;
  double y = v - 0.5;
  int x0 = static_cast<int>(std::floor(x));
  int y0 = static_cast<int>(std::floor(y));
  double fx = x - x0;
  double fy = y - y0;
  double acc = 0.0;
  for (int dy = 0; dy <= 1; ++dy) {
    int yi = std::clamp(y0 + dy, 0, img.height - 1);
    double wy = dy ? fy : 1.0 - fy;
    for (int dx = 0; dx <= 1; ++dx) {
      int xi = std::clamp(x0 + dx, 0, img.width - 1);
      double wx = dx ? fx : 1.0 - fx;
      acc += wx * wy * img.at(xi, yi, c);
    }
  }
  return static_cast<float>(acc);
}

// Output rows [y0, y1) of the rotation. The inverse map takes output pixel
// centers back into source coordinates.
void rotate_rows(const RasterImage& src, RasterImage& dst, double cos_t, double sin_t,
                 int y0, int y1) {
  const double cx_src = src.width * 0.5;
  const double cy_src = src.height * 0.5;
  const double cx_dst = dst.width * 0.5;
  const double cy_dst = dst.height * 0.5;
  for (int y = y0; y < y1; ++y) {
    for (int x = 0; x < dst.width; ++x) {
      double dx = (x + 0.5) - cx_dst;
      double dy = (y + 0.5) - cy_dst;
      double u = cos_t * dx - sin_t * dy + cx_src;
      double v = sin_t * dx + cos_t * dy + cy_src;
      for (int c = 0; c < src.channels; ++c) {
        dst.at(x, y, c) = sample_bilinear(src, u, v, c);
      }
    }
  }
}

RasterImage rotate_impl(const RasterImage& img, Angle theta, bool parallel) {
  img.check_shape();
  if (img.empty()) throw std::invalid_argument("rotate_image: empty image");
  const double rad = theta.radians();
  const double c = std::cos(rad);
  const double s = std::sin(rad);
  int w2 = 0, h2 = 0;
  rotated_canvas_size(img.width, img.height, theta, w2, h2);
  RasterImage dst = RasterImage::make(w2, h2, img.channels);
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h2; ++y) {
      rotate_rows(img, dst, c, s, y, y + 1);
    }
  } else {
    rotate_rows(img, dst, c, s, 0, h2);
  }
  return dst;
}

RasterImage rotate_and_crop_impl(const RasterImage& img, Angle theta, int out_size,
                                 bool parallel) {
  if (out_size <= 0) throw std::invalid_argument("rotate_and_crop: out_size must be > 0");
  RasterImage rotated = rotate_impl(img, theta, parallel);
  CropRect rect = largest_inscribed_rect(img.width, img.height, theta);
  rect.width -= 2.0 * kCropMarginPx;
  rect.height -= 2.0 * kCropMarginPx;
  if (rect.width < 2.0 || rect.height < 2.0) {
    throw std::invalid_argument("rotate_and_crop: crop degenerates below 2x2 pixels");
  }
  return crop_resize(rotated, rect, out_size, out_size);
}

}  // namespace

RasterImage RasterImage::make(int w, int h, int c, float fill) {
  if (w <= 0 || h <= 0 || (c != 1 && c != 3)) {
    throw std::invalid_argument("RasterImage: bad dimensions");
  }
  RasterImage img;
  img.width = w;
  img.height = h;
  img.channels = c;
  img.data.assign(static_cast<size_t>(w) * h * c, fill);
  return img;
}

void RasterImage::check_shape() const {
  if (width < 0 || height < 0 || (channels != 1 && channels != 3) ||
      data.size() != static_cast<size_t>(width) * height * channels) {
    throw std::invalid_argument("RasterImage: dimensions and buffer disagree");
  }
}

void rotated_canvas_size(int w, int h, Angle theta, int& out_w, int& out_h) {
  const double rad = theta.radians();
  const double ac = std::fabs(std::cos(rad));
  const double as = std::fabs(std::sin(rad));
  out_w = std::max(1, static_cast<int>(std::ceil(w * ac + h * as - 1e-9)));
  out_h = std::max(1, static_cast<int>(std::ceil(w * as + h * ac - 1e-9)));
}

RasterImage rotate_image(const RasterImage& img, Angle theta) {
  return rotate_impl(img, theta, true);
}

RasterImage rotate_image_serial(const RasterImage& img, Angle theta) {
  return rotate_impl(img, theta, false);
}

CropRect largest_inscribed_rect(int width, int height, Angle theta) {
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("largest_inscribed_rect: degenerate source");
  }
  const double rad = theta.radians();
  // Folding the angle with |sin|, |cos| reduces it to [0, 90] by the
  // rectangle's symmetries (theta -> -theta and theta -> theta + 90 with
  // width/height swapped).
  const double s = std::fabs(std::sin(rad));
  const double c = std::fabs(std::cos(rad));
  const bool width_longer = width >= height;
  const double side_long = width_longer ? width : height;
  const double side_short = width_longer ? height : width;

  double rect_w = 0.0, rect_h = 0.0;
  if (side_short <= 2.0 * s * c * side_long || std::fabs(s - c) < 1e-10) {
    // Half constrained: two opposite crop corners touch the long sides. The
    // square-at-45-degrees case lands here, keeping cos(2a) out of play.
    double x = 0.5 * side_short;
    if (width_longer) {
      rect_w = x / s;
      rect_h = x / c;
    } else {
      rect_w = x / c;
      rect_h = x / s;
    }
  } else {
    // Fully constrained: the crop touches all four sides.
    double cos_2a = c * c - s * s;
    rect_w = (width * c - height * s) / cos_2a;
    rect_h = (height * c - width * s) / cos_2a;
  }

  int canvas_w = 0, canvas_h = 0;
  rotated_canvas_size(width, height, theta, canvas_w, canvas_h);
  CropRect rect;
  rect.center_x = canvas_w * 0.5;
  rect.center_y = canvas_h * 0.5;
  rect.width = rect_w;
  rect.height = rect_h;
  return rect;
}

RasterImage crop_resize(const RasterImage& img, const CropRect& rect, int out_w, int out_h) {
  img.check_shape();
  if (out_w <= 0 || out_h <= 0) throw std::invalid_argument("crop_resize: bad output size");
  if (!(rect.width > 0.0) || !(rect.height > 0.0)) {
    throw std::invalid_argument("crop_resize: empty rectangle");
  }
  const double x0 = rect.center_x - rect.width * 0.5;
  const double y0 = rect.center_y - rect.height * 0.5;
  RasterImage dst = RasterImage::make(out_w, out_h, img.channels);
  for (int y = 0; y < out_h; ++y) {
    double v = y0 + (y + 0.5) / out_h * rect.height;
    for (int x = 0; x < out_w; ++x) {
      double u = x0 + (x + 0.5) / out_w * rect.width;
      for (int c = 0; c < img.channels; ++c) {
        dst.at(x, y, c) = sample_bilinear_clamped(img, u, v, c);
      }
    }
  }
  return dst;
}

RasterImage resize_bilinear(const RasterImage& img, int out_w, int out_h) {
  CropRect full;
  full.center_x = img.width * 0.5;
  full.center_y = img.height * 0.5;
  full.width = img.width;
  full.height = img.height;
  return crop_resize(img, full, out_w, out_h);
}

RasterImage rotate_and_crop(const RasterImage& img, Angle theta, int out_size) {
  return rotate_and_crop_impl(img, theta, out_size, true);
}

RasterImage rotate_and_crop_serial(const RasterImage& img, Angle theta, int out_size) {
  return rotate_and_crop_impl(img, theta, out_size, false);
}

}  // namespace rotkit
