#pragma once

#include "trapmodes/errors.hpp"
#include "trapmodes/specfun.hpp"
#include "trapmodes/quadrature.hpp"
#include "trapmodes/potential.hpp"
#include "trapmodes/levelset.hpp"
#include "trapmodes/geometry.hpp"
#include "trapmodes/structure.hpp"
#include "trapmodes/verify.hpp"
#include "trapmodes/io.hpp"
