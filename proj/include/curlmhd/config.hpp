#pragma once

#include "curlmhd/forms.hpp"
#include "curlmhd/mesh.hpp"
#include "curlmhd/system.hpp"
#include "curlmhd/timestep.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace curlmhd {

/// Validated run description. See README for the JSON schema.
struct RunConfig {
  std::string scenario;
  std::vector<Variant> methods{Variant::method1};
  std::vector<int> degrees{1};
  std::vector<int> resolutions;  // empty: scenario default
  std::vector<std::pair<double, double>> nus;  // empty: scenario default
  double T = -1.0;   // > 0 overrides
  double dt = -1.0;  // > 0 overrides
  FormParams params;  // stabilization parameters (nu fields unused)
  NewtonOptions newton;
  std::optional<MeshStyle> style;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out_dir = "out";
  bool csv = true;
  bool vtk = false;
  bool contours = false;
  bool series = true;
};

/// Parses JSON text; unknown keys and invalid values throw ConfigError naming the key path.
RunConfig parse_config(const std::string& json_text);
RunConfig parse_config_file(const std::string& path);

}  // namespace curlmhd
