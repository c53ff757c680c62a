/*
 * Copyright (c) 2026 tsgraph authors.
 *     All rights reserved.
 *
 *  Licensed under the Apache License, Version 2.0 (the "License");
 *  you may not use this file except in compliance with the License.
 *  You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 *  Unless required by applicable law or agreed to in writing,
 *  software distributed under the License is distributed on an "AS
 *  IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either
 *  express or implied.  See the License for the specific language
 *  governing permissions and limitations under the License.
 */

#ifndef TSGRAPH_ERRORS_HPP
#define TSGRAPH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tsgraph {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define TSGRAPH_DEFINE_ERROR(name)                                  \
  class name : public Error {                                       \
   public:                                                          \
    explicit name(const std::string& msg) : Error(#name ": " + msg) {} \
  }

// Storage / file format
TSGRAPH_DEFINE_ERROR(IoError);
TSGRAPH_DEFINE_ERROR(CorruptFile);
TSGRAPH_DEFINE_ERROR(UnsupportedCodec);
TSGRAPH_DEFINE_ERROR(TruncatedStream);

// Codec preconditions
TSGRAPH_DEFINE_ERROR(DecreasingSequence);

// Writer preconditions
TSGRAPH_DEFINE_ERROR(UnsortedInput);
TSGRAPH_DEFINE_ERROR(PartitionMismatch);
TSGRAPH_DEFINE_ERROR(DuplicateId);

// Query / engine
TSGRAPH_DEFINE_ERROR(UnknownAttribute);
TSGRAPH_DEFINE_ERROR(UnknownDirection);
TSGRAPH_DEFINE_ERROR(UnknownVertex);
TSGRAPH_DEFINE_ERROR(ProgramError);
TSGRAPH_DEFINE_ERROR(NegativeWeight);
TSGRAPH_DEFINE_ERROR(EmptyGraph);
TSGRAPH_DEFINE_ERROR(InvalidArgument);

#undef TSGRAPH_DEFINE_ERROR

}  // namespace tsgraph

#endif  // TSGRAPH_ERRORS_HPP
