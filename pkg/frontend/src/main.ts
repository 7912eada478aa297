import { AdvisorClient } from "./api.js";
import { Store } from "./state.js";
import { mountApp } from "./ui.js";

const root = document.getElementById("app");
if (root === null) throw new Error("missing #app mount point");
mountApp(root, new Store(), (baseUrl) => new AdvisorClient(baseUrl));
