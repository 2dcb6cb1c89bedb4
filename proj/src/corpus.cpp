#include "relaxgap/corpus.hpp"

#include <cstdlib>

#ifndef RELAXGAP_CORPUS_DIR
#define RELAXGAP_CORPUS_DIR "corpus"
#endif

namespace relaxgap {

std::string corpus_dir() {
  if (const char* env = std::getenv("RELAXGAP_CORPUS_DIR")) return env;
  return RELAXGAP_CORPUS_DIR;
}

std::vector<ExampleDescriptor> list_examples() {
  const GridSpec ref;                               // 20 x 40 x 21, degree 4
  // two state dimensions, test degree 2: the rotation field annihilates
  // radial test polynomials, and their degree-4 moment rows force terminal
  // radii no cell center can realize exactly
  const GridSpec planar{10, 16, 9, 2};
  return {
      {"example1", "example1.json", 0.0, 0.05, ref, false,
       "double-well control cost; the optimum chatters between u = -1 and u = +1"},
      {"convex_steer", "convex_steer.json", 0.81, 0.01, ref, false,
       "steer x from 1 into [-0.1, 0.1] at minimal integral of u^2; constant u = -0.9 is optimal"},
      {"zero", "zero.json", 0.0, 1e-9, ref, false, "everything costs nothing"},
      {"tangential_disk", "tangential_disk.json", std::nullopt, 0, planar, false,
       "rotation field on the unit disk: the velocity is tangent at every boundary point, "
       "so no control can push inward"},
      {"terminal_linear", "terminal_linear.json", -1.0, 0.05, ref, false,
       "minimize the endpoint of x' = u; bang control u = -1 reaches -1"},
      {"gap_candidate", "gap_candidate.json", std::nullopt, 0, ref, true,
       "user-supplied slot for a problem with a genuine relaxation gap"},
  };
}

const ExampleDescriptor& find_example(const std::string& name) {
  static const std::vector<ExampleDescriptor> all = list_examples();
  for (const auto& d : all)
    if (d.name == name) return d;
  throw ProblemError("example name", "no bundled example named " + name);
}

Problem load_example(const std::string& name) {
  const auto& d = find_example(name);
  return load_problem(corpus_dir() + "/" + d.file);
}

}  // namespace relaxgap
