#pragma once

#include "hodgewp/error.hpp"
#include "hodgewp/report.hpp"
#include "hodgewp/linalg.hpp"
#include "hodgewp/jet.hpp"
#include "hodgewp/hodge_core.hpp"
#include "hodgewp/vhs_models.hpp"
#include "hodgewp/wp_geometry.hpp"
#include "hodgewp/partial_hodge.hpp"
#include "hodgewp/hodge_metric.hpp"
#include "hodgewp/dim1_asymptotics.hpp"
#include "hodgewp/geometry.hpp"
#include "hodgewp/verification.hpp"
#include "hodgewp/model_io.hpp"
#include "hodgewp/plot.hpp"
#include "hodgewp/sweep.hpp"
