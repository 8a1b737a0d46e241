// SPDX-License-Identifier: MIT

#ifndef PLAB_CHECKPOINT_HPP
#define PLAB_CHECKPOINT_HPP

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "plab/common.hpp"

namespace plab {

/// On-disk state container: a JSON metadata header plus named raw float64
/// arrays, written as one binary file.  Used by the command-line driver to
/// save converged states and to re-verify their invariants later.
class Checkpoint {
public:
  nlohmann::json meta;

  void add_array(const std::string& name, std::vector<double> values);
  void add_complex(const std::string& name, const std::vector<cdouble>& values);

  bool has_array(const std::string& name) const { return arrays_.count(name) > 0; }
  const std::vector<double>& array(const std::string& name) const;
  std::vector<cdouble> complex_array(const std::string& name) const;

  std::vector<std::string> array_names() const;

  void save(const std::string& path) const;
  static Checkpoint load(const std::string& path);

private:
  std::map<std::string, std::vector<double>> arrays_;
};

}  // namespace plab

#endif  // PLAB_CHECKPOINT_HPP
