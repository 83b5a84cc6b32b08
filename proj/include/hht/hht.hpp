#pragma once

#include "hht/adaptive.hpp"
#include "hht/analysis.hpp"
#include "hht/controllers.hpp"
#include "hht/csv.hpp"
#include "hht/fixed_point.hpp"
#include "hht/metrics.hpp"
#include "hht/models/disease.hpp"
#include "hht/models/fhn.hpp"
#include "hht/models/hodgkin_huxley.hpp"
#include "hht/models/vdp.hpp"
#include "hht/parallel.hpp"
#include "hht/rk45.hpp"
#include "hht/schemes.hpp"
#include "hht/svg.hpp"
#include "hht/system.hpp"
#include "hht/types.hpp"
