#pragma once

#include "opmeasure/borel_set.hpp"
#include "opmeasure/cell.hpp"
#include "opmeasure/dilation.hpp"
#include "opmeasure/errors.hpp"
#include "opmeasure/hellinger.hpp"
#include "opmeasure/jordan.hpp"
#include "opmeasure/l2.hpp"
#include "opmeasure/linalg.hpp"
#include "opmeasure/maximal_type.hpp"
#include "opmeasure/measure.hpp"
#include "opmeasure/multiplicity.hpp"
#include "opmeasure/random.hpp"
#include "opmeasure/scalar_measure.hpp"
#include "opmeasure/tolerances.hpp"
