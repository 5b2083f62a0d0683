#pragma once

#include <string>
#include <vector>

namespace veerflow {

// Gluing documents for layered triangulations of once-punctured-torus bundles,
// one flattened tetrahedron per flip. The flip word is over {D, U, V}: D flips
// the current diagonal, U and V the other two edge slopes. All orientation-
// preserving closings whose result passes taut validation and veering coloring
// are returned.
std::vector<std::string> layered_bundle_fixtures(const std::string& flip_word);

// The 2-tetrahedron figure-eight-knot-complement fixture with fixed labels.
// Edge 0 is the top edge of tet 0; the fiber class in face weights is
// (1,1,0,0), monodromy stretch factor (3+sqrt 5)/2.
const char* figure_eight_json();

}  // namespace veerflow
