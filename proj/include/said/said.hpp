#pragma once

#include "said/core.hpp"
#include "said/filters.hpp"
#include "said/io.hpp"
#include "said/metrics.hpp"
#include "said/pipeline.hpp"
#include "said/resample.hpp"
