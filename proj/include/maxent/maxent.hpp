/* Copyright 2026 The maxent-ig Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

#include "maxent/ablation.hpp"
#include "maxent/attribution.hpp"
#include "maxent/baselines.hpp"
#include "maxent/data.hpp"
#include "maxent/entropy.hpp"
#include "maxent/export.hpp"
#include "maxent/idx.hpp"
#include "maxent/invariance.hpp"
#include "maxent/losses.hpp"
#include "maxent/matrix.hpp"
#include "maxent/model_io.hpp"
#include "maxent/nn.hpp"
#include "maxent/nonconservation.hpp"
#include "maxent/parallel.hpp"
#include "maxent/sweep.hpp"
#include "maxent/tensor.hpp"
#include "maxent/train.hpp"
