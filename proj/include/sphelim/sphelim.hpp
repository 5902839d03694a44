#pragma once

#include "sphelim/rational.hpp"
#include "sphelim/rootdata.hpp"
#include "sphelim/cfunc.hpp"
#include "sphelim/parallel.hpp"
#include "sphelim/limits.hpp"
#include "sphelim/sphere.hpp"
#include "sphelim/io.hpp"
