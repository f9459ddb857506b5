#pragma once

#include <stdexcept>
#include <string>

namespace fsv {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// special functions
struct NonConvergence : Error { using Error::Error; };
struct PoleAtC : Error { using Error::Error; };

// kernels
struct SingularLag : Error { using Error::Error; };

// characteristic functions
struct OutsideStrip : Error { using Error::Error; };
struct BranchCut : Error { using Error::Error; };

// quadrature
struct NoDecay : Error { using Error::Error; };
struct PanelBudgetExceeded : Error { using Error::Error; };

// pricing
struct MomentUnavailable : Error { using Error::Error; };
struct PricingFailed : Error { using Error::Error; };

// monte carlo
struct InvalidBase : Error { using Error::Error; };

// chain ingestion
struct SchemaError : Error { using Error::Error; };
struct NonPositivePrice : Error { using Error::Error; };

} // namespace fsv
