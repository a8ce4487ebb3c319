// Copyright 2026 The Watertight Authors.
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace watertight {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad or unsupported input data. The CLI maps these to exit code 1.
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// No triangles survived loading, or an algorithm was handed an empty mesh.
class EmptyMeshError : public InputError {
 public:
  EmptyMeshError() : InputError("mesh has no non-degenerate triangles") {}
};

/// All vertices coincide, so the mesh cannot be scaled into the unit box.
class ZeroExtentError : public InputError {
 public:
  ZeroExtentError() : InputError("mesh has zero extent") {}
};

/// An internal contract was broken (e.g. the extracted surface is not a closed
/// manifold). Always indicates a bug; the CLI maps these to exit code 2.
class MalformedSurfaceError : public Error {
 public:
  using Error::Error;
};

class NoTrianglesError : public Error {
 public:
  NoTrianglesError() : Error("octree holds no triangles") {}
};

}  // namespace watertight
