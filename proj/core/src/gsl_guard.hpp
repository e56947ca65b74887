#pragma once

#include <gsl/gsl_errno.h>

namespace fpreg::detail {

// GSL aborts on error by default; library code checks return codes instead.
inline void quiet_gsl() {
  static const bool once = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)once;
}

}  // namespace fpreg::detail
