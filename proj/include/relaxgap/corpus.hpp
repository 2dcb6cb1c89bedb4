#ifndef RELAXGAP_CORPUS_HPP_
#define RELAXGAP_CORPUS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "relaxgap/occmeas.hpp"
#include "relaxgap/problem.hpp"

namespace relaxgap {

struct ExampleDescriptor {
  std::string name;
  std::string file;  // relative to corpus_dir()
  /// Best-known optimal value with its tolerance, when one exists in closed
  /// form; consumed by the acceptance suite.
  std::optional<double> expected_value;
  double tolerance = 0;
  GridSpec reference_grid;
  bool optional = false;  // slot for a user-supplied file, may be absent
  std::string notes;
};

/// The bundled example problems.  `gap_candidate` is an empty slot: drop a
/// problem file of that name into corpus/ to include it in sweeps.
std::vector<ExampleDescriptor> list_examples();

/// Directory the bundled files live in: $RELAXGAP_CORPUS_DIR when set,
/// otherwise the source-tree path baked in at build time.
std::string corpus_dir();

Problem load_example(const std::string& name);
const ExampleDescriptor& find_example(const std::string& name);

}  // namespace relaxgap

#endif  // RELAXGAP_CORPUS_HPP_
