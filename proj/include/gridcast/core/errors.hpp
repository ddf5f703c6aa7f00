#pragma once

#include <stdexcept>
#include <string>

namespace gridcast {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// core / csv
struct MalformedCsv : Error { using Error::Error; };
struct DuplicateDate : Error { using Error::Error; };
struct NonNumericValue : Error { using Error::Error; };
struct UnknownTarget : Error { using Error::Error; };
struct ConstraintViolation : Error { using Error::Error; };

// preprocess
struct AllMissing : Error { using Error::Error; };
struct WindowTooLarge : Error { using Error::Error; };
struct BadOrder : Error { using Error::Error; };
struct NonPositiveAfterOffset : Error { using Error::Error; };
struct NoLogStep : Error { using Error::Error; };
struct TooShort : Error { using Error::Error; };
struct HeadMismatch : Error { using Error::Error; };

// diagnostics
struct ConstantSeries : Error { using Error::Error; };
struct LagTooLarge : Error { using Error::Error; };
struct SingularRegression : Error { using Error::Error; };

// stat models
struct NonInvertible : Error { using Error::Error; };
struct SingularExog : Error { using Error::Error; };
struct MissingFutureExog : Error { using Error::Error; };
struct AlphaOutOfRange : Error { using Error::Error; };
struct NoValidModel : Error { using Error::Error; };

// ml models
struct ShapeMismatch : Error { using Error::Error; };
struct NonFiniteLoss : Error { using Error::Error; };
struct EmptyData : Error { using Error::Error; };
struct BadHyperparameter : Error { using Error::Error; };

// eval
struct LengthMismatch : Error { using Error::Error; };
struct SplitOutOfRange : Error { using Error::Error; };
struct EmptyGrid : Error { using Error::Error; };
struct UnknownFamily : Error { using Error::Error; };

// synth / cli
struct BadConfig : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct UsageError : Error { using Error::Error; };

} // namespace gridcast
