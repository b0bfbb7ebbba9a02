#pragma once

#include "xda/errors.hpp"
#include "xda/exact.hpp"
#include "xda/target.hpp"
#include "xda/contfrac.hpp"
#include "xda/geometry.hpp"
#include "xda/parallel.hpp"
#include "xda/lattice.hpp"
#include "xda/rap.hpp"
#include "xda/ifs.hpp"
#include "xda/extrinsic.hpp"
#include "xda/io.hpp"
#include "xda/acceptance.hpp"
