#pragma once

#include "twistlab/errors.hpp"
#include "twistlab/multi_index.hpp"
#include "twistlab/hermite.hpp"
#include "twistlab/grid.hpp"
#include "twistlab/special_hermite.hpp"
#include "twistlab/gamma.hpp"
#include "twistlab/twisted.hpp"
#include "twistlab/semigroup.hpp"
#include "twistlab/schatten.hpp"
#include "twistlab/singularity.hpp"
#include "twistlab/strichartz.hpp"
#include "twistlab/duality.hpp"
#include "twistlab/report.hpp"
