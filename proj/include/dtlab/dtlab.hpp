#pragma once

#include "dtlab/error.hpp"
#include "dtlab/genfun.hpp"
#include "dtlab/jointlaw.hpp"
#include "dtlab/quadrature.hpp"
#include "dtlab/report.hpp"
#include "dtlab/rmtsim.hpp"
#include "dtlab/snpoly.hpp"
#include "dtlab/speclaw.hpp"
#include "dtlab/wbranch.hpp"
