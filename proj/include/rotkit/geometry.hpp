#pragma once

#include <vector>

#include "rotkit/angle.hpp"

namespace rotkit {

// Dense row-major image, intensities in [0, 1], 1 or 3 channels.
struct RasterImage {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<float> data;

  static RasterImage make(int w, int h, int c = 1, float fill = 0.0f);

  float& at(int x, int y, int c = 0) {
    return data[(static_cast<size_t>(y) * width + x) * channels + c];
  }
  float at(int x, int y, int c = 0) const {
    return data[(static_cast<size_t>(y) * width + x) * channels + c];
  }
  size_t pixel_count() const { return static_cast<size_t>(width) * height; }
  bool empty() const { return width <= 0 || height <= 0; }

  // Throws if dimensions and buffer size disagree.
  void check_shape() const;
};

// Axis-aligned rectangle in rotated-image coordinates.
struct CropRect {
  double center_x = 0.0;
  double center_y = 0.0;
  double width = 0.0;
  double height = 0.0;
};

// Bounding box of the source rectangle rotated by theta.
void rotated_canvas_size(int w, int h, Angle theta, int& out_w, int& out_h);

// Rotates image content counterclockwise (as displayed) by theta. The output
// canvas is the bounding box of the rotated source; bilinear resampling;
// pixels outside the source are 0. The _serial variant is the reference
// kernel; the plain one runs the row loop under OpenMP. Both produce
// bit-identical output.
RasterImage rotate_image(const RasterImage& img, Angle theta);
RasterImage rotate_image_serial(const RasterImage& img, Angle theta);

// Maximum-area axis-aligned rectangle inscribed in the rotated w x h
// rectangle, centered on the rotated canvas. Closed form.
CropRect largest_inscribed_rect(int width, int height, Angle theta);

// Bilinear crop of `rect` resampled to out_w x out_h.
RasterImage crop_resize(const RasterImage& img, const CropRect& rect, int out_w, int out_h);

RasterImage resize_bilinear(const RasterImage& img, int out_w, int out_h);

// rotate_image + largest_inscribed_rect (shrunk by a fixed safety margin so
// no border fill bleeds into the output) + resize to out_size x out_size.
RasterImage rotate_and_crop(const RasterImage& img, Angle theta, int out_size);
RasterImage rotate_and_crop_serial(const RasterImage& img, Angle theta, int out_size);

// Margin trimmed from each side of the inscribed rectangle before resampling,
// covering the bilinear footprints of the two resampling passes.
inline constexpr double kCropMarginPx = 2.0;

}  // namespace rotkit
