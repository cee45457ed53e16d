#ifndef FRLP_FRLP_HPP
#define FRLP_FRLP_HPP

#include "frlp/errors.hpp"
#include "frlp/node_set.hpp"
#include "frlp/network.hpp"
#include "frlp/instance_io.hpp"
#include "frlp/routes.hpp"
#include "frlp/covering.hpp"
#include "frlp/feasibility.hpp"
#include "frlp/lp/simplex.hpp"
#include "frlp/lp/models.hpp"
#include "frlp/objective.hpp"
#include "frlp/solver.hpp"
#include "frlp/oracle.hpp"
#include "frlp/generators.hpp"

#endif  // FRLP_FRLP_HPP
