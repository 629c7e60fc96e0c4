/* Copyright 2026 The tenbed Authors. All Rights Reserved.

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

#include "tenbed/checkpoint.hpp"
#include "tenbed/embedding.hpp"
#include "tenbed/errors.hpp"
#include "tenbed/grad.hpp"
#include "tenbed/kv_config.hpp"
#include "tenbed/layer_config.hpp"
#include "tenbed/morphology.hpp"
#include "tenbed/param_audit.hpp"
#include "tenbed/synthetic.hpp"
#include "tenbed/tensor_core.hpp"
#include "tenbed/train.hpp"

namespace tenbed {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tenbed
