#pragma once

#include "localkmeans/common.hpp"
#include "localkmeans/harness.hpp"
#include "localkmeans/hungarian.hpp"
#include "localkmeans/lloyd.hpp"
#include "localkmeans/metrics.hpp"
#include "localkmeans/mixture_data.hpp"
#include "localkmeans/protocol.hpp"
#include "localkmeans/seeding.hpp"
