// Compiles every public header in one unit so template errors surface without a test.

#include "fiberbound/errors.hpp"
#include "fiberbound/field.hpp"
#include "fiberbound/monomial.hpp"
#include "fiberbound/mvpoly.hpp"
#include "fiberbound/upoly.hpp"
#include "fiberbound/gcd.hpp"
#include "fiberbound/linalg.hpp"
#include "fiberbound/jacobian.hpp"
#include "fiberbound/syzygy.hpp"
#include "fiberbound/fibers.hpp"
#include "fiberbound/mapfile.hpp"
#include "fiberbound/report.hpp"
#include "fiberbound/selftest.hpp"
