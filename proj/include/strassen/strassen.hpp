// Copyright 2026 The strassen Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include "strassen/coupling.hpp"
#include "strassen/decompose.hpp"
#include "strassen/error.hpp"
#include "strassen/generators.hpp"
#include "strassen/kernels.hpp"
#include "strassen/lp.hpp"
#include "strassen/measure.hpp"
#include "strassen/mot.hpp"
#include "strassen/orders.hpp"
#include "strassen/pm_mcmc.hpp"
#include "strassen/rng.hpp"
#include "strassen/wasserstein.hpp"
