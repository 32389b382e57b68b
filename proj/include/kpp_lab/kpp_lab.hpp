#pragma once

#include "kpp_lab/ball_bvp.hpp"
#include "kpp_lab/cylinder_zero.hpp"
#include "kpp_lab/errors.hpp"
#include "kpp_lab/fkpp_bbm.hpp"
#include "kpp_lab/linear_comparison.hpp"
#include "kpp_lab/nonlinearity.hpp"
#include "kpp_lab/radial_shooting.hpp"
