#pragma once

#include <span>

#include <json.hpp>

#include "phasespace/dynamics.hpp"
#include "phasespace/observables.hpp"

namespace phasespace::detail {

nlohmann::ordered_json encode(const EvolutionReport& report);
nlohmann::ordered_json encode(const MomentReport& report);
nlohmann::ordered_json encode(std::span<const EhrenfestRow> rows);

}  // namespace phasespace::detail
