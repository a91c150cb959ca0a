#pragma once

#include "fused/core/errors.hpp"
#include "fused/core/lead.hpp"
#include "fused/core/parallel.hpp"
#include "fused/core/rng.hpp"
#include "fused/sim/types.hpp"
#include "fused/sim/scenario.hpp"
#include "fused/sim/world.hpp"
#include "fused/sim/controller.hpp"
#include "fused/sim/config.hpp"
#include "fused/sim/simulation.hpp"
#include "fused/sensors/noise_model.hpp"
#include "fused/sensors/geometry.hpp"
#include "fused/sensors/camera.hpp"
#include "fused/sensors/radar.hpp"
#include "fused/sensors/dbscan.hpp"
#include "fused/fusion/types.hpp"
#include "fused/fusion/default_fusion.hpp"
#include "fused/fusion/kalman.hpp"
#include "fused/fusion/mathworks.hpp"
#include "fused/fusion/best_sensor.hpp"
#include "fused/objectives/dist.hpp"
#include "fused/objectives/objectives.hpp"
#include "fused/fuzzer/operators.hpp"
#include "fused/fuzzer/campaign.hpp"
#include "fused/analyzer/coverage.hpp"
#include "fused/analyzer/ks.hpp"
#include "fused/analyzer/replay.hpp"
#include "fused/analyzer/report.hpp"
#include "fused/fixtures/fixtures.hpp"
#include "fused/io/config.hpp"
#include "fused/io/store.hpp"
#include "fused/io/report_csv.hpp"
