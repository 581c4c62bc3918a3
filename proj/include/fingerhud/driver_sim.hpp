#pragma once

#include <cstdint>
#include <optional>

#include "fingerhud/driver_params.hpp"
#include "fingerhud/layout.hpp"
#include "fingerhud/runlog.hpp"
#include "fingerhud/scenario.hpp"

namespace fingerhud {

// Test hooks. A forced reaction time replaces every sampled one.
struct SimOverrides {
    std::optional<double> brake_rt_s;
    int subject = 0;
};

// Deterministic for equal inputs. Baseline runs drive the road without
// executing tasks, so they carry no task records.
RunLog simulate_run(const Scenario& scenario, Condition condition, const DriverParams& params, std::uint64_t seed,
                    const SimOverrides& overrides = {}, const MenuLayout& layout = default_layout());

// Point of gaze classification used by the generator and by the metrics.
Aoi classify_gaze(const AoiGeometry& geometry, double x_px, double y_px);

}  // namespace fingerhud
