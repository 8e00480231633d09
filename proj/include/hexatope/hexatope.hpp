#pragma once

#include "hexatope/brouwer.hpp"
#include "hexatope/budget.hpp"
#include "hexatope/dinterval.hpp"
#include "hexatope/grprops.hpp"
#include "hexatope/hexboard.hpp"
#include "hexatope/hexsolve.hpp"
#include "hexatope/linalg.hpp"
#include "hexatope/lp.hpp"
#include "hexatope/rational.hpp"
#include "hexatope/scomplex.hpp"
#include "hexatope/service.hpp"
#include "hexatope/setfam.hpp"
