#include "lfqa/image.hpp"

namespace lfqa {

Image downsample2(const Image& img) {
  if (img.width < 2 || img.height < 2)
    fail(Err::TooSmall, "downsample2 needs at least 2x2 input");
  Image out(img.width / 2, img.height / 2);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      double s = img.at(2 * x, 2 * y) + img.at(2 * x + 1, 2 * y) +
                 img.at(2 * x, 2 * y + 1) + img.at(2 * x + 1, 2 * y + 1);
      out.at(x, y) = s * 0.25;
    }
  }
  return out;
}

}  // namespace lfqa
