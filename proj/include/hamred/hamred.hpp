#pragma once

#include "hamred/types.hpp"
#include "hamred/poisson.hpp"
#include "hamred/integrator.hpp"
#include "hamred/csv.hpp"
#include "hamred/linalg.hpp"
#include "hamred/rigid_body.hpp"
#include "hamred/central_force.hpp"
#include "hamred/reconstruction.hpp"
#include "hamred/sp2k.hpp"
#include "hamred/dual_pair.hpp"
#include "hamred/portrait.hpp"
#include "hamred/portrait_io.hpp"
#include "hamred/verify.hpp"
