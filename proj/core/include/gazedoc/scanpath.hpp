#ifndef GAZEDOC_SCANPATH_HPP_
#define GAZEDOC_SCANPATH_HPP_

#include <span>
#include <string>
#include <vector>

namespace gazedoc {

// One eye fixation in source-image pixel coordinates. Pixel (i, j) is
// centered on the integer coordinate (i, j).
struct Fixation {
  double x = 0.0;
  double y = 0.0;
  double duration_ms = 0.0;
  int index = 0;
};

struct Scanpath {
  std::string image_id;
  std::string subject_id;
  std::vector<Fixation> fixations;
};

// Throws ValidationError naming the first fixation outside [0,w) x [0,h).
void check_fixation_bounds(std::span<const Fixation> fixations, int width,
                           int height);

// Index of the pixel containing a fixation, clamped to the image.
int pixel_column(double x, int width);
int pixel_row(double y, int height);

// First `count` fixations of a scanpath (all of them when count <= 0).
Scanpath truncated(const Scanpath& scanpath, int count);

}  // namespace gazedoc

#endif  // GAZEDOC_SCANPATH_HPP_
