#pragma once

// Umbrella header.

#include "homlift/bottleneck.hpp"
#include "homlift/common.hpp"
#include "homlift/diagram.hpp"
#include "homlift/dtm.hpp"
#include "homlift/experiment.hpp"
#include "homlift/io.hpp"
#include "homlift/lift.hpp"
#include "homlift/measure.hpp"
#include "homlift/persistence.hpp"
#include "homlift/point_cloud.hpp"
#include "homlift/rng.hpp"
#include "homlift/shapes.hpp"
#include "homlift/transport.hpp"
