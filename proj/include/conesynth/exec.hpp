#pragma once

namespace conesynth {

// Selects the OpenMP kernels or the serial reference kernels.
enum class Exec { serial, parallel };

}  // namespace conesynth
