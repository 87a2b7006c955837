# Copyright (c) strata-rings contributors. All rights reserved.
# Licensed under the MIT License.
