#pragma once

#include <stdexcept>
#include <string>

namespace pocmed {

/// Base class for all library errors. `code()` is a stable machine-readable
/// identifier used by the CLI's error JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

#define POCMED_DEFINE_ERROR(Name)                     \
  class Name : public Error {                         \
   public:                                            \
    explicit Name(const std::string& message)         \
        : Error(#Name, message) {}                    \
  }

POCMED_DEFINE_ERROR(DimensionMismatch);
POCMED_DEFINE_ERROR(EmptyEvidenceInterval);
POCMED_DEFINE_ERROR(NonPositiveSigma);
POCMED_DEFINE_ERROR(WrongLink);
POCMED_DEFINE_ERROR(EmptyResiduals);
POCMED_DEFINE_ERROR(NonInvertibleCdf);
POCMED_DEFINE_ERROR(QuadratureDivergence);
POCMED_DEFINE_ERROR(PointEvidence);
POCMED_DEFINE_ERROR(RankDeficient);
POCMED_DEFINE_ERROR(InsufficientRows);
POCMED_DEFINE_ERROR(PerfectSeparation);
POCMED_DEFINE_ERROR(NonBinaryOutcome);
POCMED_DEFINE_ERROR(TooManyFailedResamples);
POCMED_DEFINE_ERROR(EvidenceStarvation);
POCMED_DEFINE_ERROR(MissingColumn);
POCMED_DEFINE_ERROR(UnmappableValue);
POCMED_DEFINE_ERROR(EmptyDataset);
POCMED_DEFINE_ERROR(ConfigError);

#undef POCMED_DEFINE_ERROR

}  // namespace pocmed
