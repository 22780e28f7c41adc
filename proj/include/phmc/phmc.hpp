/*
 * Copyright 2026 The phmc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PHMC_PHMC_HPP
#define PHMC_PHMC_HPP

#include "phmc/diagnostics.hpp"
#include "phmc/gradients.hpp"
#include "phmc/io.hpp"
#include "phmc/math.hpp"
#include "phmc/model.hpp"
#include "phmc/models/lgssm.hpp"
#include "phmc/models/poisson.hpp"
#include "phmc/parallel.hpp"
#include "phmc/particles.hpp"
#include "phmc/priors.hpp"
#include "phmc/random.hpp"
#include "phmc/samplers.hpp"
#include "phmc/smc.hpp"
#include "phmc/types.hpp"
#include "phmc/version.hpp"

#endif  // PHMC_PHMC_HPP
