// Copyright 2026 The hjlax Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Umbrella header.

#pragma once

#include "hjlax/admm.hpp"
#include "hjlax/core1d.hpp"
#include "hjlax/minplus.hpp"
#include "hjlax/oracle.hpp"
#include "hjlax/parallel.hpp"
#include "hjlax/prox1d.hpp"
#include "hjlax/rng.hpp"
#include "hjlax/separable.hpp"
#include "hjlax/transform.hpp"
#include "hjlax/types.hpp"
#include "hjlax/version.hpp"
