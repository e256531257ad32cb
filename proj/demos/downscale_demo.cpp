// Downscales one image with SAID and plain bicubic and prints how much
// gradient energy each keeps.
//
//   downscale_demo input.png 4

#include <cstdlib>
#include <iostream>
#include <cmath>

#include "said/said.hpp"

namespace {

double mean_sobel(const said::Image& img) {
  const auto [gx, gy] = said::sobel_gradients(said::to_luma(img));
  double sum = 0.0;
  for (std::size_t i = 0; i < gx.size(); ++i)
    sum += std::sqrt(gx.samples()[i] * gx.samples()[i] + gy.samples()[i] * gy.samples()[i]);
  return sum / static_cast<double>(gx.size());
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: downscale_demo <image> <factor>\n";
    return 2;
  }
  const said::Image input = said::io::load(argv[1]);
  const auto spec = said::ScaleSpec::by_factor(std::atof(argv[2]));

  const auto result = said::said_downscale(input, spec);
  const auto bicubic = said::baseline_downscale(input, spec, said::Method::Bicubic);

  said::io::save(result.image, "said_out.png");
  said::io::save(bicubic, "bicubic_out.png");
  std::cout << "output " << result.image.width() << "x" << result.image.height() << '\n'
            << "mean sobel  said: " << mean_sobel(result.image) << "  bicubic: " << mean_sobel(bicubic) << '\n';
}
