// Copyright 2026 The corpusforge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <curl/curl.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <thread>

#include "corpusforge/dump.hpp"
#include "corpusforge/error.hpp"
#include "corpusforge/io.hpp"

namespace corpusforge {

struct FetchOptions {
  int max_attempts = 4;
  std::chrono::milliseconds backoff{2000};  // doubled after each failed attempt
  long connect_timeout_s = 30;
};

namespace detail {

inline void curl_global() {
  static const bool initialised = [] { return curl_global_init(CURL_GLOBAL_DEFAULT) == 0; }();
  if (!initialised) throw Error("libcurl initialisation failed");
}

struct CurlDeleter {
  void operator()(CURL* c) const { curl_easy_cleanup(c); }
};
using CurlHandle = std::unique_ptr<CURL, CurlDeleter>;

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};

inline std::size_t write_to_file(char* data, std::size_t size, std::size_t n, void* user) {
  return std::fwrite(data, size, n, static_cast<std::FILE*>(user)) * size;
}

struct Probe {
  long status = 0;
  curl_off_t length = -1;
};

inline CurlHandle make_handle(const std::string& url, const FetchOptions& options) {
  CurlHandle h(curl_easy_init());
  if (!h) throw Error("curl_easy_init failed");
  curl_easy_setopt(h.get(), CURLOPT_URL, url.c_str());
  curl_easy_setopt(h.get(), CURLOPT_FOLLOWLOCATION, 1L);
  curl_easy_setopt(h.get(), CURLOPT_CONNECTTIMEOUT, options.connect_timeout_s);
  curl_easy_setopt(h.get(), CURLOPT_USERAGENT, "corpusforge/1.0");
  curl_easy_setopt(h.get(), CURLOPT_NOSIGNAL, 1L);
  return h;
}

}  // namespace detail

// Downloads the dump named by `descriptor`. `dest` is either a directory or
// the target file path. Data goes to "<target>.part" and is renamed only once
// its size equals the advertised content length, so an existing target is
// always complete and is returned without touching the network.
inline fs::path fetch_dump(const DumpDescriptor& descriptor, const fs::path& dest,
                           const FetchOptions& options = {}) {
  const fs::path target = (fs::is_directory(dest) || dest.filename().empty())
                              ? dest / descriptor.file_name()
                              : dest;
  if (fs::exists(target)) return target;
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path part = target.string() + ".part";

  detail::curl_global();
  auto delay = options.backoff;
  std::string last_error;
  for (int attempt = 1; attempt <= options.max_attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(delay);
      delay *= 2;
    }

    detail::Probe probe;
    {
      auto h = detail::make_handle(descriptor.source_url, options);
      curl_easy_setopt(h.get(), CURLOPT_NOBODY, 1L);
      const CURLcode rc = curl_easy_perform(h.get());
      if (rc != CURLE_OK) {
        last_error = curl_easy_strerror(rc);
        continue;
      }
      curl_easy_getinfo(h.get(), CURLINFO_RESPONSE_CODE, &probe.status);
      curl_easy_getinfo(h.get(), CURLINFO_CONTENT_LENGTH_DOWNLOAD_T, &probe.length);
    }
    if (probe.status == 404) {
      throw AbsentProjectError("project absent for language: " + descriptor.database() +
                               " (" + descriptor.source_url + " returned 404)");
    }
    if (probe.status >= 500 || probe.status == 429) {
      last_error = "HTTP " + std::to_string(probe.status);
      continue;
    }
    if (probe.status != 200) {
      throw Error("unexpected HTTP status " + std::to_string(probe.status) + " for " +
                  descriptor.source_url);
    }
    if (probe.length < 0) {
      throw IntegrityError("server did not report a content length for " +
                           descriptor.source_url);
    }

    auto have = fs::exists(part) ? static_cast<curl_off_t>(fs::file_size(part)) : 0;
    if (have > probe.length) {
      fs::remove(part);
      have = 0;
    }
    if (have < probe.length) {
      std::unique_ptr<std::FILE, detail::FileCloser> out(
          std::fopen(part.c_str(), have > 0 ? "ab" : "wb"));
      if (!out) throw IoError("cannot write " + part.string());
      auto h = detail::make_handle(descriptor.source_url, options);
      curl_easy_setopt(h.get(), CURLOPT_WRITEFUNCTION, &detail::write_to_file);
      curl_easy_setopt(h.get(), CURLOPT_WRITEDATA, out.get());
      if (have > 0) curl_easy_setopt(h.get(), CURLOPT_RESUME_FROM_LARGE, have);
      const CURLcode rc = curl_easy_perform(h.get());
      long status = 0;
      curl_easy_getinfo(h.get(), CURLINFO_RESPONSE_CODE, &status);
      out.reset();
      if (rc != CURLE_OK) {
        last_error = curl_easy_strerror(rc);
        continue;
      }
      if (have > 0 && status == 200) {
        // Range ignored: the body was appended from byte 0. Start over.
        fs::remove(part);
        last_error = "server ignored range request";
        continue;
      }
      if (status != 200 && status != 206) {
        last_error = "HTTP " + std::to_string(status);
        continue;
      }
    }
    const auto size = static_cast<curl_off_t>(fs::file_size(part));
    if (size != probe.length) {
      throw IntegrityError("length mismatch for " + descriptor.file_name() + ": expected " +
                           std::to_string(probe.length) + " bytes, got " +
                           std::to_string(size));
    }
    fs::rename(part, target);
    return target;
  }
  throw RetryableNetworkError("download of " + descriptor.source_url + " failed: " + last_error,
                              options.max_attempts);
}

}  // namespace corpusforge
