#pragma once

namespace gheat {

/// Selects between the OpenMP kernel and its serial reference.
enum class Exec { Serial, Parallel };

}  // namespace gheat
