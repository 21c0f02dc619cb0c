#pragma once

namespace robtrade {

/// Which batch kernel runs per-sample work. Both produce bit-identical results.
enum class Execution { serial, parallel };

}  // namespace robtrade
