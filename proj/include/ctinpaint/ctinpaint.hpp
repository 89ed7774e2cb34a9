#pragma once

// Library umbrella. The HTTP layer lives in ctinpaint/service.hpp.

#include "ctinpaint/contours.hpp"
#include "ctinpaint/distance_fields.hpp"
#include "ctinpaint/domain.hpp"
#include "ctinpaint/errors.hpp"
#include "ctinpaint/fast_marching.hpp"
#include "ctinpaint/fixtures.hpp"
#include "ctinpaint/guidance.hpp"
#include "ctinpaint/harmonic.hpp"
#include "ctinpaint/io/png.hpp"
#include "ctinpaint/io/stopset_json.hpp"
#include "ctinpaint/io/tfld.hpp"
#include "ctinpaint/metrics.hpp"
#include "ctinpaint/pipeline.hpp"
#include "ctinpaint/raster.hpp"
#include "ctinpaint/transport.hpp"
#include "ctinpaint/vec2.hpp"
