// Copyright 2026 The rbmgs Authors
// SPDX-License-Identifier: Apache-2.0

// Internal helpers shared by the checkpoint and trajectory writers.

#pragma once

#include <json.hpp>

#include "rbmgs/rbm.hpp"

namespace rbmgs::detail {

nlohmann::json parameters_to_json(const RbmParameters& p);
RbmParameters parameters_from_json(const nlohmann::json& j);

}  // namespace rbmgs::detail
