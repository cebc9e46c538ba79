#pragma once

#include "sudkit/dfs.hpp"
#include "sudkit/identities.hpp"
#include "sudkit/invariants.hpp"
#include "sudkit/json_io.hpp"
#include "sudkit/linalg.hpp"
#include "sudkit/matrix.hpp"
#include "sudkit/multiparticle.hpp"
#include "sudkit/structure_tensors.hpp"
#include "sudkit/su_basis.hpp"
