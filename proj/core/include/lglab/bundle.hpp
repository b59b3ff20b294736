#pragma once

// A model together with the named quantity classes, protocols and
// arrangements declared alongside it. Zoo builders and model files both
// produce bundles.

#include <string>
#include <string_view>
#include <vector>

#include "lglab/classifier.hpp"
#include "lglab/lg_analysis.hpp"
#include "lglab/ontic.hpp"
#include "lglab/operational.hpp"

namespace lglab {

struct ModelBundle {
  std::string name;
  ModelPtr model;
  NamedSet<std::vector<std::string>> quantity_classes;  ///< class label -> measurement names
  NamedSet<Protocol> protocols;
  NamedSet<ArrangementSpec> arrangements;

  /// Empty name selects the first declared arrangement.
  LgArrangement arrangement(std::string_view name = {}) const {
    if (name.empty()) {
      if (arrangements.empty()) throw DomainError("model '" + this->name + "' declares no arrangement");
      return LgArrangement::create(model, arrangements.begin()->second);
    }
    return LgArrangement::create(model, arrangements.at(name));
  }

  /// Empty name selects the first declared class.
  QuantityClass quantity_class(std::string_view label = {},
                               double eps = kDefaultTolerances.equivalence) const {
    if (label.empty()) {
      if (quantity_classes.empty()) {
        throw DomainError("model '" + name + "' declares no quantity class");
      }
      const auto& [first, members] = *quantity_classes.begin();
      return QuantityClass::create(*model, first, members, eps);
    }
    return QuantityClass::create(*model, std::string(label), quantity_classes.at(label), eps);
  }
};

}  // namespace lglab
