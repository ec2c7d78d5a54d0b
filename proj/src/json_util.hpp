#pragma once

#include "json.hpp"
#include <string_view>

#include "fairscore/calib.hpp"

namespace fairscore::detail {

nlohmann::json calib_to_json(const CalibModel& model);
CalibModel calib_from_json(const nlohmann::json& j);
nlohmann::json parse_json(std::string_view text);

}  // namespace fairscore::detail
