#pragma once

#include "qoeslice/env/types.hpp"
#include "qoeslice/qoe/preference.hpp"

namespace qoeslice::qoe {

// Supplies the preference vector attached to each arriving request.
class PreferenceSource {
 public:
  virtual ~PreferenceSource() = default;
  virtual PreferenceVector preferences(const env::SliceRequest& request) = 0;
};

class FixedPreferences final : public PreferenceSource {
 public:
  explicit FixedPreferences(PreferenceVector prefs = PreferenceVector::equal()) : prefs_(prefs) {}
  PreferenceVector preferences(const env::SliceRequest&) override { return prefs_; }

 private:
  PreferenceVector prefs_;
};

}  // namespace qoeslice::qoe
