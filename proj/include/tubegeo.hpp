#pragma once

#include "tubegeo/circle.hpp"
#include "tubegeo/densities.hpp"
#include "tubegeo/disc.hpp"
#include "tubegeo/errors.hpp"
#include "tubegeo/geodesics.hpp"
#include "tubegeo/hclass.hpp"
#include "tubegeo/herglotz.hpp"
#include "tubegeo/io.hpp"
#include "tubegeo/measures.hpp"
#include "tubegeo/quadrature.hpp"
#include "tubegeo/reinhardt.hpp"
#include "tubegeo/tube_geometry.hpp"
