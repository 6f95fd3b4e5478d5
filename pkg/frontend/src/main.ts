import { Client } from "./api.js";
import { ExplorerApp } from "./app.js";

const root = document.querySelector<HTMLElement>("#app");
if (!root) throw new Error("#app container missing");
const base = root.getAttribute("data-api-base") ?? "";
void new ExplorerApp(root, new Client(base)).start();
