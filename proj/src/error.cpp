/*
 * Copyright 2026 The UCC Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include <ucc/error.h>

namespace ucc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedLine:
      return "MalformedLine";
    case ErrorCode::kEmptyDataset:
      return "EmptyDataset";
    case ErrorCode::kDegenerateRow:
      return "DegenerateRow";
    case ErrorCode::kNegativeSamplingStall:
      return "NegativeSamplingStall";
    case ErrorCode::kShapeMismatch:
      return "ShapeMismatch";
    case ErrorCode::kUnknownFlag:
      return "UnknownFlag";
    case ErrorCode::kMissingArgument:
      return "MissingArgument";
    case ErrorCode::kConfigParseError:
      return "ConfigParseError";
    case ErrorCode::kInvalidArgument:
      return "InvalidArgument";
    case ErrorCode::kIo:
      return "IoError";
  }
  return "Unknown";
}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace ucc
