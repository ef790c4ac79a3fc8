// Writes a synthetic input set (image.png, depth.pgm, labels.png,
// labels.json) for trying the pipeline without any model.
#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "ldpaint/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic scene for ldpaint", "ldpaint-scene"};
  std::string out;
  int width = 640;
  int height = 512;
  long long seed = -1;
  int regions = 8;
  app.add_option("dir", out, "Output directory")->required();
  app.add_option("--width", width, "Image width")->capture_default_str();
  app.add_option("--height", height, "Image height")->capture_default_str();
  app.add_option("--random", seed, "Random Voronoi scene with this seed instead of the two-things scene");
  app.add_option("--regions", regions, "Region count for --random")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  if (width < 1 || height < 1) {
    std::cerr << "ldpaint-scene: size must be positive\n";
    return 2;
  }
  try {
    const auto scene = seed >= 0
                           ? ldpaint::random_scene(std::uint64_t(seed), width, height, regions)
                           : ldpaint::two_things_scene(width, height);
    ldpaint::save_scene(scene, out);
  } catch (const std::exception& e) {
    std::cerr << "ldpaint-scene: " << e.what() << '\n';
    return 4;
  }
  std::cout << "wrote " << out << '\n';
  return 0;
}
