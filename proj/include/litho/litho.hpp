#pragma once

#include "litho/combinatorics.hpp"
#include "litho/deposition.hpp"
#include "litho/fock.hpp"
#include "litho/pattern.hpp"
#include "litho/verify.hpp"
