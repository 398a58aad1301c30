#pragma once

#include "conley/error.hpp"
#include "conley/ring.hpp"
#include "conley/matrix.hpp"
#include "conley/linalg.hpp"
#include "conley/poset.hpp"
#include "conley/graded.hpp"
#include "conley/block_map.hpp"
#include "conley/les.hpp"
#include "conley/symmetry.hpp"
#include "conley/instance.hpp"
#include "conley/search.hpp"
#include "conley/io.hpp"
