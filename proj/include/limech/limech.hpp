#pragma once

#include "limech/certify.hpp"
#include "limech/construct.hpp"
#include "limech/error.hpp"
#include "limech/graph.hpp"
#include "limech/io.hpp"
#include "limech/lp.hpp"
#include "limech/mechanism.hpp"
#include "limech/optimize.hpp"
#include "limech/oracle.hpp"
#include "limech/random.hpp"
